#include "lgsp/json_io.hpp"

#include "lgsp/errors.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lgsp {

namespace {

using nlohmann::json;

template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

Complex complex_from(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw ParseError("complex scalar must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

MatrixXcd matrix_from(const json& j, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw ValidationError("matrix must have " + std::to_string(n) + " rows");
    MatrixXcd m(n, n);
    for (int r = 0; r < n; ++r) {
        const json& row = j[static_cast<size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ValidationError("matrix row must have " + std::to_string(n) + " entries");
        for (int c = 0; c < n; ++c) m(r, c) = complex_from(row[static_cast<size_t>(c)]);
    }
    return m;
}

Signal signal_from(const json& j) {
    const int n = j.at("n").get<int>();
    if (n <= 0) throw ValidationError("signal: node count must be positive");
    const int start = j.at("start").get<int>();
    std::vector<VectorXcd> samples;
    for (const auto& sj : j.at("samples")) {
        if (!sj.is_array() || static_cast<int>(sj.size()) != n)
            throw ValidationError("signal sample must have " + std::to_string(n) + " entries");
        VectorXcd v(n);
        for (int i = 0; i < n; ++i) v(i) = complex_from(sj[static_cast<size_t>(i)]);
        samples.push_back(std::move(v));
    }
    return {n, start, std::move(samples)};
}

RegionSelector region_from(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        const std::string prefix = "cluster:";
        if (s.rfind(prefix, 0) != 0)
            throw ParseError("region string must look like \"cluster:<index>\"");
        try {
            size_t used = 0;
            const int index = std::stoi(s.substr(prefix.size()), &used);
            if (used != s.size() - prefix.size()) throw std::invalid_argument(s);
            return ClusterRef{index};
        } catch (const std::logic_error&) {
            throw ParseError("bad cluster index in region \"" + s + "\"");
        }
    }
    if (j.is_object() && j.contains("disc")) {
        const json& d = j.at("disc");
        return Disc{complex_from(d.at("center")), d.at("radius").get<double>()};
    }
    throw ParseError("region must be \"cluster:<index>\" or {\"disc\": ...}");
}

std::string fmt_complex(Complex z) {
    return "[" + format_double(z.real()) + ", " + format_double(z.imag()) + "]";
}

std::string fmt_matrix(const MatrixXcd& m) {
    std::string out = "[";
    for (int r = 0; r < m.rows(); ++r) {
        if (r) out += ", ";
        out += "[";
        for (int c = 0; c < m.cols(); ++c) {
            if (c) out += ", ";
            out += fmt_complex(m(r, c));
        }
        out += "]";
    }
    return out + "]";
}

std::string fmt_vector(const VectorXcd& v) {
    std::string out = "[";
    for (int i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt_complex(v(i));
    }
    return out + "]";
}

std::string fmt_doubles(const std::vector<double>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_double(v[i]);
    }
    return out + "]";
}

std::string signal_body(const Signal& x) {
    std::string out = "{\"n\": " + std::to_string(x.node_count()) +
                      ", \"start\": " + std::to_string(x.start()) + ", \"samples\": [";
    for (int s = 0; s < x.size(); ++s) {
        if (s) out += ", ";
        out += fmt_vector(x.samples()[static_cast<size_t>(s)]);
    }
    return out + "]}";
}

std::string region_body(const RegionSelector& region) {
    if (const auto* c = std::get_if<ClusterRef>(&region))
        return "\"cluster:" + std::to_string(c->index) + "\"";
    const auto& d = std::get<Disc>(region);
    return "{\"disc\": {\"center\": " + fmt_complex(d.center) +
           ", \"radius\": " + format_double(d.radius) + "}}";
}

std::string optional_body(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("null");
}

} // namespace

KernelSequence kernel_from_json(const std::string& text) {
    return guarded("kernel", [&] {
        const json j = json::parse(text);
        const int n = j.at("n").get<int>();
        if (n <= 0) throw ValidationError("kernel: node count must be positive");
        std::vector<std::pair<int, MatrixXcd>> taps;
        for (const auto& tj : j.at("taps"))
            taps.emplace_back(tj.at("t").get<int>(), matrix_from(tj.at("m"), n));
        return KernelSequence::from_taps(n, taps);
    });
}

Signal signal_from_json(const std::string& text) {
    return guarded("signal", [&] { return signal_from(json::parse(text)); });
}

PhiSpec phi_from_json(const std::string& text) {
    return guarded("phi", [&] {
        const json j = json::parse(text);
        PhiSpec spec;
        for (const auto& pj : j.at("pieces")) {
            PhiPiece piece;
            piece.region = region_from(pj.at("region"));
            piece.family = pj.at("family").get<std::string>();
            piece.params = pj.at("params").get<std::vector<double>>();
            piece.holomorphic = piece.family != "gaussian";
            spec.pieces.push_back(std::move(piece));
        }
        validate_phi(spec);
        return spec;
    });
}

Dataset dataset_from_json(const std::string& text) {
    return guarded("dataset", [&] {
        const json j = json::parse(text);
        Dataset data;
        for (const auto& pj : j.at("pairs"))
            data.pairs.emplace_back(signal_from(pj.at("x")), signal_from(pj.at("y")));
        if (data.pairs.empty()) throw ValidationError("dataset: no pairs");
        return data;
    });
}

KernelSequence load_kernel(const std::string& path) { return kernel_from_json(read_file(path)); }
Signal load_signal(const std::string& path) { return signal_from_json(read_file(path)); }
PhiSpec load_phi(const std::string& path) { return phi_from_json(read_file(path)); }
Dataset load_dataset(const std::string& path) { return dataset_from_json(read_file(path)); }

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string kernel_to_json(const KernelSequence& k) {
    std::string out = "{\n  \"n\": " + std::to_string(k.node_count()) + ",\n  \"taps\": [";
    bool first = true;
    for (const auto& [t, m] : k.taps()) {
        out += first ? "\n" : ",\n";
        out += "    {\"t\": " + std::to_string(t) + ", \"m\": " + fmt_matrix(m) + "}";
        first = false;
    }
    out += first ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::string signal_to_json(const Signal& x) { return signal_body(x) + "\n"; }

std::string phi_to_json(const PhiSpec& phi) {
    std::string out = "{\n  \"pieces\": [";
    for (size_t i = 0; i < phi.pieces.size(); ++i) {
        out += i ? ",\n" : "\n";
        const auto& p = phi.pieces[i];
        out += "    {\"region\": " + region_body(p.region) + ", \"family\": \"" + p.family +
               "\", \"params\": " + fmt_doubles(p.params) + "}";
    }
    out += phi.pieces.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::string dataset_to_json(const Dataset& d) {
    std::string out = "{\n  \"pairs\": [";
    for (size_t i = 0; i < d.pairs.size(); ++i) {
        out += i ? ",\n" : "\n";
        out += "    {\"x\": " + signal_body(d.pairs[i].first) +
               ", \"y\": " + signal_body(d.pairs[i].second) + "}";
    }
    out += d.pairs.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::string regions_to_json(const RegionSet& r) {
    std::string out = "{\n  \"clusters\": [";
    for (size_t c = 0; c < r.clusters.size(); ++c) {
        if (c) out += ", ";
        out += "[";
        for (size_t i = 0; i < r.clusters[c].size(); ++i) {
            if (i) out += ", ";
            out += std::to_string(r.clusters[c][i]);
        }
        out += "]";
    }
    out += "],\n  \"separation\": " + optional_body(r.separation) + "\n}\n";
    return out;
}

std::string fit_to_json(const FitResult& f, std::optional<std::uint64_t> seed) {
    std::string out = "{\n  \"theta\": " + fmt_doubles(f.theta) + ",\n  \"final_loss\": " +
                      format_double(f.final_loss) + ",\n  \"converged\": " +
                      (f.converged ? "true" : "false") + ",\n  \"trace\": " + fmt_doubles(f.trace);
    if (seed) out += ",\n  \"seed\": " + std::to_string(*seed);
    out += "\n}\n";
    return out;
}

std::string report_to_json(const ComparisonReport& r) {
    auto side = [](int clusters, const std::optional<double>& sep, double pvar, double bvar) {
        return "{\"clusters\": " + std::to_string(clusters) + ", \"separation\": " +
               optional_body(sep) + ", \"projection_variation\": " + format_double(pvar) +
               ", \"bandpass_variation\": " + format_double(bvar) + "}";
    };
    return "{\n  \"grid\": " + std::to_string(r.grid_size) + ",\n  \"delta\": " +
           format_double(r.delta) + ",\n  \"model\": " +
           side(r.model_clusters, r.model_separation, r.model_projection_variation,
                r.model_bandpass_variation) +
           ",\n  \"product\": " +
           side(r.product_clusters, r.product_separation, r.product_projection_variation,
                r.product_bandpass_variation) +
           "\n}\n";
}

std::string spectrum_to_csv(const SpectrumLocus& locus) {
    std::string out = "omega,branch,re,im\n";
    for (const auto& p : locus.points)
        out += format_double(p.omega) + "," + std::to_string(p.branch) + "," +
               format_double(p.value.real()) + "," + format_double(p.value.imag()) + "\n";
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw ParseError("cannot read " + path);
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot write " + tmp);
        out << content;
        out.flush();
        if (!out.good()) throw ParseError("cannot write " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ParseError("cannot move " + tmp + " into place");
}

} // namespace lgsp
