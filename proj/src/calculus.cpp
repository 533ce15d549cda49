#include "lgsp/calculus.hpp"

#include "lgsp/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace lgsp {

namespace {

Complex cparam(const std::vector<double>& p, size_t i) { return {p[i], p[i + 1]}; }

void validate_piece(const PhiPiece& piece) {
    const size_t np = piece.params.size();
    if (piece.family == "poly") {
        if (np < 1) throw ValidationError("poly piece needs at least one coefficient");
        if (!piece.holomorphic) throw ValidationError("poly pieces are holomorphic");
    } else if (piece.family == "exp_affine") {
        if (np != 4) throw ValidationError("exp_affine piece needs params [alpha_re, alpha_im, beta_re, beta_im]");
        if (!piece.holomorphic) throw ValidationError("exp_affine pieces are holomorphic");
    } else if (piece.family == "sqrt_shift") {
        if (np != 2) throw ValidationError("sqrt_shift piece needs params [gamma_re, gamma_im]");
        if (!piece.holomorphic) throw ValidationError("sqrt_shift pieces are holomorphic");
    } else if (piece.family == "gaussian") {
        if (np != 3) throw ValidationError("gaussian piece needs params [mu_re, mu_im, sigma]");
        if (piece.params[2] <= 0.0) throw ValidationError("gaussian sigma must be positive");
        if (piece.holomorphic) throw ValidationError("gaussian pieces are not holomorphic");
    } else {
        throw ValidationError("unknown scalar family: " + piece.family);
    }
    for (double v : piece.params)
        if (!std::isfinite(v)) throw ValidationError("non-finite parameter in " + piece.family + " piece");
    if (const auto* d = std::get_if<Disc>(&piece.region)) {
        if (d->radius <= 0.0) throw ValidationError("disc region radius must be positive");
    } else if (std::get<ClusterRef>(piece.region).index < 0) {
        throw ValidationError("cluster region index must be nonnegative");
    }
}

} // namespace

Complex PhiPiece::value(Complex z) const {
    if (family == "poly") {
        Complex acc = 0.0;
        for (auto it = params.rbegin(); it != params.rend(); ++it) acc = acc * z + *it;
        return acc;
    }
    if (family == "exp_affine") return std::exp(cparam(params, 0) * z + cparam(params, 2));
    if (family == "sqrt_shift") return std::sqrt(z - cparam(params, 0));
    if (family == "gaussian") {
        const double sigma = params[2];
        const double d2 = std::norm(z - cparam(params, 0));
        return std::exp(-d2 / (sigma * sigma)) / (2.0 * std::numbers::pi * sigma);
    }
    throw ValidationError("unknown scalar family: " + family);
}

Complex PhiPiece::derivative(Complex z) const {
    if (family == "poly") {
        Complex acc = 0.0;
        for (size_t i = params.size(); i-- > 1;) acc = acc * z + static_cast<double>(i) * params[i];
        return acc;
    }
    if (family == "exp_affine") return cparam(params, 0) * value(z);
    if (family == "sqrt_shift") return 0.5 / std::sqrt(z - cparam(params, 0));
    if (family == "gaussian")
        throw ModeError("gaussian pieces have no complex derivative (not holomorphic)");
    throw ValidationError("unknown scalar family: " + family);
}

PhiPiece phi_poly(std::vector<double> coeffs, RegionSelector region) {
    PhiPiece p{std::move(region), "poly", std::move(coeffs), true};
    validate_piece(p);
    return p;
}

PhiPiece phi_exp_affine(Complex alpha, Complex beta, RegionSelector region) {
    PhiPiece p{std::move(region), "exp_affine",
               {alpha.real(), alpha.imag(), beta.real(), beta.imag()}, true};
    validate_piece(p);
    return p;
}

PhiPiece phi_sqrt_shift(Complex gamma, RegionSelector region) {
    PhiPiece p{std::move(region), "sqrt_shift", {gamma.real(), gamma.imag()}, true};
    validate_piece(p);
    return p;
}

PhiSpec gaussian_phi(Complex mu, double sigma, RegionSelector region) {
    PhiPiece p{std::move(region), "gaussian", {mu.real(), mu.imag(), sigma}, false};
    validate_piece(p);
    return {{p}};
}

void validate_phi(const PhiSpec& phi) {
    for (const auto& piece : phi.pieces) validate_piece(piece);
}

Disc enclosing_disc(const SpectrumLocus& locus, double margin) {
    if (locus.points.empty()) throw ValidationError("enclosing_disc: locus is empty");
    if (margin < 0.0) throw ValidationError("enclosing_disc: margin must be nonnegative");
    Complex center = 0.0;
    for (const auto& p : locus.points) center += p.value;
    center /= static_cast<double>(locus.points.size());
    double radius = 0.0;
    for (const auto& p : locus.points) radius = std::max(radius, std::abs(p.value - center));
    return {center, radius + margin};
}

SpectralMultipliers SpectralMultipliers::constant(int branches, int grid_size, Complex value) {
    return {std::vector<std::vector<Complex>>(
        static_cast<size_t>(branches), std::vector<Complex>(static_cast<size_t>(grid_size), value))};
}

std::vector<int> resolve_pieces(const PhiSpec& phi, const BranchSet& bs, const RegionSet* regions) {
    validate_phi(phi);
    std::vector<int> owner(static_cast<size_t>(bs.branch_count()), -1);
    for (int k = 0; k < bs.branch_count(); ++k) {
        for (size_t i = 0; i < phi.pieces.size(); ++i) {
            bool member = false;
            if (const auto* c = std::get_if<ClusterRef>(&phi.pieces[i].region)) {
                if (!regions)
                    throw ValidationError("cluster region selector requires a region set");
                if (c->index >= regions->cluster_count())
                    throw ValidationError("cluster region index out of range");
                member = regions->cluster_of(k) == c->index;
            } else {
                const auto& d = std::get<Disc>(phi.pieces[i].region);
                member = true;
                for (const auto& lam : bs.lambda[static_cast<size_t>(k)])
                    member = member && std::abs(lam - d.center) <= d.radius;
            }
            if (member) {
                if (owner[static_cast<size_t>(k)] >= 0)
                    throw ValidationError("phi pieces overlap on branch " + std::to_string(k));
                owner[static_cast<size_t>(k)] = static_cast<int>(i);
            }
        }
    }
    return owner;
}

FrequencyTable multiplier_table(const BranchSet& bs, const SpectralMultipliers& a) {
    if (a.branch_count() != bs.branch_count())
        throw ValidationError("multiplier branch count does not match the branch set");
    for (const auto& seq : a.values) {
        if (static_cast<int>(seq.size()) != bs.grid.size)
            throw ValidationError("multiplier sequence length does not match the grid");
        for (const auto& v : seq)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw ValidationError("non-finite multiplier value");
    }
    FrequencyTable out{bs.grid, {}};
    out.values.reserve(static_cast<size_t>(bs.grid.size));
    for (int j = 0; j < bs.grid.size; ++j) {
        MatrixXcd acc = MatrixXcd::Zero(bs.n, bs.n);
        for (int k = 0; k < bs.branch_count(); ++k)
            acc += a.values[static_cast<size_t>(k)][static_cast<size_t>(j)] *
                       bs.projection[static_cast<size_t>(k)][static_cast<size_t>(j)] +
                   bs.nilpotent[static_cast<size_t>(k)][static_cast<size_t>(j)];
        out.values.push_back(std::move(acc));
    }
    return out;
}

FrequencyTable phi_table_spectral(const BranchSet& bs, const PhiSpec& phi,
                                  const RegionSet* regions) {
    const auto owner = resolve_pieces(phi, bs, regions);
    for (int k = 0; k < bs.branch_count(); ++k) {
        const int o = owner[static_cast<size_t>(k)];
        if (o >= 0 && !phi.pieces[static_cast<size_t>(o)].holomorphic && bs.branch_has_nilpotent(k))
            throw ModeError("branch " + std::to_string(k) +
                            " carries a nilpotent but its piece has no derivative");
    }
    FrequencyTable out{bs.grid, {}};
    out.values.reserve(static_cast<size_t>(bs.grid.size));
    for (int j = 0; j < bs.grid.size; ++j) {
        MatrixXcd acc = MatrixXcd::Zero(bs.n, bs.n);
        for (int k = 0; k < bs.branch_count(); ++k) {
            const int o = owner[static_cast<size_t>(k)];
            if (o < 0) continue; // default zero outside all regions
            const auto& piece = phi.pieces[static_cast<size_t>(o)];
            const Complex lam = bs.lambda[static_cast<size_t>(k)][static_cast<size_t>(j)];
            acc += piece.value(lam) * bs.projection[static_cast<size_t>(k)][static_cast<size_t>(j)];
            if (bs.branch_has_nilpotent(k))
                acc += piece.derivative(lam) *
                       bs.nilpotent[static_cast<size_t>(k)][static_cast<size_t>(j)];
        }
        out.values.push_back(std::move(acc));
    }
    return out;
}

FrequencyTable phi_table_contour(const FrequencyTable& table, const PhiSpec& phi, int q,
                                 const RegionSet* regions) {
    validate_phi(phi);
    if (q < 16) throw ValidationError("contour quadrature needs at least 16 nodes");
    for (const auto& piece : phi.pieces)
        if (!piece.holomorphic)
            throw ModeError("contour application requires every piece to be holomorphic");

    const int n = table.node_count();
    const MatrixXcd id = MatrixXcd::Identity(n, n);
    FrequencyTable out{table.grid, {}};
    out.values.reserve(table.values.size());

    for (const auto& s : table.values) {
        Eigen::ComplexEigenSolver<MatrixXcd> es(s, false);
        if (es.info() != Eigen::Success)
            throw NumericalError("contour application: eigenvalue solve failed");
        const VectorXcd eigs = es.eigenvalues();

        // geometric claim of eigenvalues by pieces; claims must not overlap
        std::vector<int> claimed(static_cast<size_t>(n), -1);
        for (size_t i = 0; i < phi.pieces.size(); ++i) {
            for (int e = 0; e < n; ++e) {
                bool member = false;
                if (const auto* c = std::get_if<ClusterRef>(&phi.pieces[i].region)) {
                    if (!regions)
                        throw ValidationError("cluster region selector requires a region set");
                    if (c->index >= regions->cluster_count())
                        throw ValidationError("cluster region index out of range");
                    for (const auto& p : regions->cluster_locus[static_cast<size_t>(c->index)])
                        member = member || std::abs(eigs(e) - p) <= regions->radius;
                } else {
                    const auto& d = std::get<Disc>(phi.pieces[i].region);
                    member = std::abs(eigs(e) - d.center) <= d.radius;
                }
                if (member) {
                    if (claimed[static_cast<size_t>(e)] >= 0)
                        throw ValidationError("phi regions overlap on the spectrum");
                    claimed[static_cast<size_t>(e)] = static_cast<int>(i);
                }
            }
        }

        MatrixXcd acc = MatrixXcd::Zero(n, n);
        for (size_t i = 0; i < phi.pieces.size(); ++i) {
            std::vector<int> members;
            for (int e = 0; e < n; ++e)
                if (claimed[static_cast<size_t>(e)] == static_cast<int>(i)) members.push_back(e);
            if (members.empty()) continue;

            Complex center;
            double radius;
            if (const auto* d = std::get_if<Disc>(&phi.pieces[i].region)) {
                center = d->center;
                radius = d->radius;
            } else {
                center = 0.0;
                for (int e : members) center += eigs(e);
                center /= static_cast<double>(members.size());
                double r_in = 0.0;
                for (int e : members) r_in = std::max(r_in, std::abs(eigs(e) - center));
                double d_out = std::numeric_limits<double>::infinity();
                for (int e = 0; e < n; ++e)
                    if (std::find(members.begin(), members.end(), e) == members.end())
                        d_out = std::min(d_out, std::abs(eigs(e) - center));
                radius = std::isfinite(d_out) ? 0.5 * (r_in + d_out)
                                              : r_in + 0.5 * std::max(1.0, spectral_norm(s));
            }
            for (int e = 0; e < n; ++e) {
                const double dist = std::abs(eigs(e) - center);
                if (std::abs(dist - radius) < 1e-6 * radius)
                    throw NumericalError("contour passes within 1e-6*radius of the spectrum");
                const bool inside = dist < radius;
                const bool ours =
                    std::find(members.begin(), members.end(), e) != members.end();
                if (inside != ours)
                    throw NumericalError("contour does not separate its claimed eigenvalues");
            }
            for (int node = 0; node < q; ++node) {
                const double theta = 2.0 * std::numbers::pi * node / q;
                const Complex dir{std::cos(theta), std::sin(theta)};
                const Complex z = center + radius * dir;
                acc += (radius * dir / static_cast<double>(q)) * phi.pieces[i].value(z) *
                       (z * id - s).partialPivLu().solve(id);
            }
        }
        out.values.push_back(std::move(acc));
    }
    return out;
}

Signal apply_multipliers(const BranchSet& bs, const SpectralMultipliers& a, const Signal& x,
                         const Window& out) {
    return apply_table(multiplier_table(bs, a), x, out);
}

Signal apply_phi_spectral(const BranchSet& bs, const PhiSpec& phi, const Signal& x,
                          const Window& out, const RegionSet* regions) {
    return apply_table(phi_table_spectral(bs, phi, regions), x, out);
}

Signal apply_phi_contour(const FrequencyTable& table, const PhiSpec& phi, int q, const Signal& x,
                         const Window& out, const RegionSet* regions) {
    return apply_table(phi_table_contour(table, phi, q, regions), x, out);
}

Signal bandpass_reference(const BranchSet& bs, int branch, double omega_star, const Signal& x,
                          const Window& out) {
    if (branch < 0 || branch >= bs.branch_count())
        throw ValidationError("bandpass_reference: branch index out of range");
    if (x.node_count() != bs.n)
        throw ValidationError("bandpass_reference: node count mismatch");
    const int m = bs.grid.size;
    const double jd = omega_star * m;
    const long j_near = std::lround(jd);
    if (std::abs(jd - static_cast<double>(j_near)) > 1e-9 * m)
        throw ValidationError("bandpass_reference: omega_star is not a grid frequency");
    const int j = static_cast<int>(((j_near % m) + m) % m);

    const VectorXcd xhat = dtft_at(x, bs.grid.omega(j));
    const VectorXcd v = bs.projection[static_cast<size_t>(branch)][static_cast<size_t>(j)] * xhat;
    std::vector<VectorXcd> samples;
    samples.reserve(static_cast<size_t>(out.length));
    for (int t = out.start; t < out.start + out.length; ++t) {
        const double phase = -2.0 * std::numbers::pi * omega_star * t;
        samples.push_back(Complex{std::cos(phase), std::sin(phase)} * v);
    }
    return {bs.n, out.start, std::move(samples)};
}

double verify_covariance(const FrequencyTable& a, const FrequencyTable& s) {
    if (a.grid.size != s.grid.size) throw ValidationError("verify_covariance: grid mismatch");
    if (a.node_count() != s.node_count())
        throw ValidationError("verify_covariance: node count mismatch");
    double worst = 0.0;
    for (size_t j = 0; j < a.values.size(); ++j)
        worst = std::max(worst, spectral_norm(a.values[j] * s.values[j] - s.values[j] * a.values[j]));
    return worst;
}

} // namespace lgsp
