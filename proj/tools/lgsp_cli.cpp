#include "lgsp/calculus.hpp"
#include "lgsp/errors.hpp"
#include "lgsp/json_io.hpp"
#include "lgsp/kernel.hpp"
#include "lgsp/learn.hpp"
#include "lgsp/product.hpp"
#include "lgsp/spectral.hpp"
#include "lgsp/transform.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace lgsp;

bool valid_grid(int m) { return m >= 8 && (m & (m - 1)) == 0; }

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

/// Output window used when the true output support is unknown: one full
/// period of the inverse transform, centered on the input window.
Window centered_window(const Signal& x, int m) {
    return {x.start() - (m - x.size()) / 2, m};
}

bool phi_needs_regions(const PhiSpec& phi) {
    for (const auto& piece : phi.pieces)
        if (std::holds_alternative<ClusterRef>(piece.region)) return true;
    return false;
}

void write_out(const std::filesystem::path& dir, const std::string& name,
               const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::string path = (dir / name).string();
    write_file_atomic(path, content);
    std::cout << "wrote " << path << "\n";
}

int cmd_spectrum(const std::string& kernel_path, int m, double delta,
                 const std::filesystem::path& out) {
    const KernelSequence k = load_kernel(kernel_path);
    const BranchSet bs = track_branches(symbol(k, FrequencyGrid(m)));
    const SpectrumLocus locus = spectrum_locus(bs);
    const RegionSet regions = detect_regions(locus, delta);
    write_out(out, "spectrum.csv", spectrum_to_csv(locus));
    write_out(out, "regions.json", regions_to_json(regions));
    return 0;
}

int cmd_apply(const std::string& kernel_path, const std::string& phi_path,
              const std::string& signal_path, int m, double delta, int q,
              const std::string& mode, const std::filesystem::path& out) {
    const KernelSequence k = load_kernel(kernel_path);
    const PhiSpec phi = load_phi(phi_path);
    const Signal x = load_signal(signal_path);
    const FrequencyTable table = symbol(k, FrequencyGrid(m));
    const Window window = centered_window(x, m);

    std::optional<BranchSet> bs;
    std::optional<RegionSet> regions;
    if (mode == "spectral" || phi_needs_regions(phi)) {
        bs = track_branches(table);
        if (phi_needs_regions(phi)) regions = detect_regions(spectrum_locus(*bs), delta);
    }
    const RegionSet* rp = regions ? &*regions : nullptr;

    const FrequencyTable atable = mode == "spectral" ? phi_table_spectral(*bs, phi, rp)
                                                     : phi_table_contour(table, phi, q, rp);
    const Signal y = apply_table(atable, x, window);
    std::cout << "covariance_commutator " << format_double(verify_covariance(atable, table))
              << "\n";
    write_out(out, "output.json", signal_to_json(y));
    return 0;
}

int cmd_compare(const std::string& kernel_path, int m, double delta,
                const std::filesystem::path& out) {
    const KernelSequence k = load_kernel(kernel_path);
    const FrequencyGrid grid(m);
    const ComparisonReport report = compare_models(k, grid, delta);
    write_out(out, "report.json", report_to_json(report));
    write_out(out, "spectrum_model.csv",
              spectrum_to_csv(spectrum_locus(track_branches(symbol(k, grid)))));
    write_out(out, "spectrum_product.csv",
              spectrum_to_csv(spectrum_locus(track_branches(symbol(product_generator(k), grid)))));
    return 0;
}

/// Standard complex Gaussian entries from a seeded mt19937_64 via
/// Box-Muller, so synthesized datasets are reproducible bit for bit.
class ComplexGaussian {
public:
    explicit ComplexGaussian(std::uint64_t seed) : rng_(seed) {}

    Complex operator()() {
        const double u1 = unit();
        const double u2 = unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a) / std::sqrt(2.0), r * std::sin(a) / std::sqrt(2.0)};
    }

private:
    double unit() { // uniform in (0, 1]
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
    }
    std::mt19937_64 rng_;
};

int cmd_fit(const std::string& kernel_path, const std::string& family_name, int degree,
            double sigma, const std::string& dataset_path, const std::vector<double>& truth,
            std::uint64_t seed, int pairs, int length, int m, double delta, int budget,
            std::vector<double> init, const std::filesystem::path& out) {
    const KernelSequence k = load_kernel(kernel_path);
    const BranchSet bs = track_branches(symbol(k, FrequencyGrid(m)));
    const SpectrumLocus locus = spectrum_locus(bs);
    const RegionSet regions = detect_regions(locus, delta);
    const Disc global = enclosing_disc(locus, 0.5);

    PhiFamily family;
    if (family_name == "poly") {
        family = polynomial_family(degree, global);
    } else if (family_name == "gaussian") {
        family = gaussian_family(global);
    } else {
        family = two_gaussian_family(ClusterRef{0}, ClusterRef{1}, sigma);
    }

    if (init.empty()) {
        if (family_name == "poly") {
            init.assign(static_cast<size_t>(family.param_count), 0.0);
        } else if (family_name == "gaussian") {
            init = {global.center.real(), global.center.imag(), 0.2};
        } else {
            for (int c = 0; c < 2 && c < regions.cluster_count(); ++c) {
                Complex mean = 0.0;
                for (const auto& z : regions.cluster_locus[static_cast<size_t>(c)]) mean += z;
                mean /= static_cast<double>(regions.cluster_locus[static_cast<size_t>(c)].size());
                init.push_back(mean.real());
                init.push_back(mean.imag());
            }
        }
    }
    if (static_cast<int>(init.size()) != family.param_count) {
        std::cerr << "error: --init needs " << family.param_count << " values\n";
        return 1;
    }

    Dataset data;
    std::optional<std::uint64_t> recorded_seed;
    if (!dataset_path.empty()) {
        data = load_dataset(dataset_path);
    } else {
        if (static_cast<int>(truth.size()) != family.param_count) {
            std::cerr << "error: --truth needs " << family.param_count << " values\n";
            return 1;
        }
        recorded_seed = seed;
        const FrequencyTable truth_table = phi_table_spectral(bs, family.build(truth), &regions);
        ComplexGaussian gauss(seed);
        const int ywin = std::min(m, 4 * length);
        for (int p = 0; p < pairs; ++p) {
            std::vector<VectorXcd> samples;
            for (int t = 0; t < length; ++t) {
                VectorXcd v(bs.n);
                for (int i = 0; i < bs.n; ++i) v(i) = gauss();
                samples.push_back(std::move(v));
            }
            Signal x(bs.n, 0, std::move(samples));
            Signal y = apply_table(truth_table, x, {-(ywin - length) / 2, ywin});
            data.pairs.emplace_back(std::move(x), std::move(y));
        }
        write_out(out, "dataset.json", dataset_to_json(data));
    }

    const FitResult result = fit(bs, family, data, init, budget, &regions);
    std::cout << "theta " << join_doubles(result.theta) << "\n";
    std::cout << "final_loss " << format_double(result.final_loss) << "\n";
    std::cout << "converged " << (result.converged ? "true" : "false") << "\n";
    write_out(out, "fit.json", fit_to_json(result, recorded_seed));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"covariant operators for time-varying graph processes"};
    app.require_subcommand(1);

    std::string kernel_path, phi_path, signal_path, dataset_path;
    std::string mode = "spectral", family = "poly", out_dir = ".";
    int m = 256, q = 64, budget = 500, degree = 1, pairs = 16, length = 8;
    double delta = 0.05, sigma = 0.1;
    std::uint64_t seed = 0;
    std::vector<double> truth, init;

    auto add_common = [&](CLI::App* sub, bool needs_delta) {
        sub->add_option("--kernel", kernel_path, "kernel JSON")->required();
        sub->add_option("--grid", m, "frequency grid size (power of two >= 8)");
        if (needs_delta) sub->add_option("--delta", delta, "region tube radius");
        sub->add_option("--out", out_dir, "output directory");
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "branch loci and regions of a kernel");
    add_common(spectrum, true);

    CLI::App* apply = app.add_subcommand("apply", "apply a spectral filter to a signal");
    add_common(apply, true);
    apply->add_option("--phi", phi_path, "scalar function JSON")->required();
    apply->add_option("--signal", signal_path, "input signal JSON")->required();
    apply->add_option("--mode", mode, "application path")
        ->check(CLI::IsMember({"spectral", "contour"}));
    apply->add_option("--quadrature", q, "contour quadrature nodes");

    CLI::App* compare = app.add_subcommand("compare", "model vs Cartesian-product baseline");
    add_common(compare, true);

    CLI::App* fitcmd = app.add_subcommand("fit", "estimate filter parameters from data");
    add_common(fitcmd, true);
    fitcmd->add_option("--family", family, "parameter family")
        ->check(CLI::IsMember({"poly", "gaussian", "two-gaussian"}));
    fitcmd->add_option("--degree", degree, "poly family degree");
    fitcmd->add_option("--sigma", sigma, "two-gaussian fixed width");
    fitcmd->add_option("--dataset", dataset_path, "dataset JSON");
    fitcmd->add_option("--truth", truth, "synthesize data from these parameters")->delimiter(',');
    fitcmd->add_option("--seed", seed, "synthetic data seed");
    fitcmd->add_option("--pairs", pairs, "synthetic pair count");
    fitcmd->add_option("--length", length, "synthetic input length");
    fitcmd->add_option("--budget", budget, "iteration budget");
    fitcmd->add_option("--init", init, "initial parameters")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (!valid_grid(m)) {
        std::cerr << "error: --grid must be a power of two >= 8\n";
        return 1;
    }
    if (delta <= 0.0) {
        std::cerr << "error: --delta must be positive\n";
        return 1;
    }
    if (q != 16 && q != 32 && q != 64 && q != 128) {
        std::cerr << "error: --quadrature must be one of 16, 32, 64, 128\n";
        return 1;
    }
    if (budget < 1) {
        std::cerr << "error: --budget must be at least 1\n";
        return 1;
    }
    if (degree < 0 || pairs < 1 || length < 1) {
        std::cerr << "error: --degree, --pairs, --length must be positive\n";
        return 1;
    }
    if (fitcmd->parsed() && dataset_path.empty() && truth.empty()) {
        std::cerr << "error: fit needs --dataset or --truth\n";
        return 1;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(kernel_path, m, delta, out_dir);
        if (apply->parsed())
            return cmd_apply(kernel_path, phi_path, signal_path, m, delta, q, mode, out_dir);
        if (compare->parsed()) return cmd_compare(kernel_path, m, delta, out_dir);
        return cmd_fit(kernel_path, family, degree, sigma, dataset_path, truth, seed, pairs,
                       length, m, delta, budget, init, out_dir);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ModeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
