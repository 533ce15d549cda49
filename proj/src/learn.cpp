#include "lgsp/learn.hpp"

#include "lgsp/errors.hpp"
#include "lgsp/transform.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace lgsp {

PhiFamily polynomial_family(int degree, RegionSelector region) {
    if (degree < 0) throw ValidationError("polynomial_family: degree must be nonnegative");
    return {"poly-" + std::to_string(degree), degree + 1,
            [region = std::move(region)](const std::vector<double>& theta) {
                return PhiSpec{{phi_poly(theta, region)}};
            }};
}

PhiFamily gaussian_family(RegionSelector region) {
    return {"gaussian", 3, [region = std::move(region)](const std::vector<double>& theta) {
                return gaussian_phi({theta[0], theta[1]}, theta[2], region);
            }};
}

PhiFamily two_gaussian_family(RegionSelector plus, RegionSelector minus, double sigma) {
    if (sigma <= 0.0) throw ValidationError("two_gaussian_family: sigma must be positive");
    return {"two-gaussian", 4,
            [plus = std::move(plus), minus = std::move(minus), sigma](const std::vector<double>& theta) {
                PhiSpec spec = gaussian_phi({theta[0], theta[1]}, sigma, plus);
                spec.pieces.push_back(gaussian_phi({theta[2], theta[3]}, sigma, minus).pieces[0]);
                return spec;
            }};
}

double loss(const BranchSet& bs, const PhiFamily& family, const std::vector<double>& theta,
            const Dataset& data, const RegionSet* regions) {
    if (data.pairs.empty()) throw ValidationError("loss: dataset is empty");
    if (static_cast<int>(theta.size()) != family.param_count)
        throw ValidationError("loss: expected " + std::to_string(family.param_count) +
                              " parameters, got " + std::to_string(theta.size()));
    const FrequencyTable table = phi_table_spectral(bs, family.build(theta), regions);
    double total = 0.0;
    for (const auto& [x, y] : data.pairs) {
        if (x.node_count() != bs.n || y.node_count() != bs.n)
            throw ValidationError("loss: dataset node count does not match the branch set");
        const Signal ax = apply_table(table, x, y.window());
        for (int t = y.start(); t < y.end(); ++t) total += (ax.at(t) - y.at(t)).squaredNorm();
    }
    return total / static_cast<double>(data.pairs.size());
}

FitResult fit(const BranchSet& bs, const PhiFamily& family, const Dataset& data,
              const std::vector<double>& init, int budget, const RegionSet* regions) {
    if (budget < 1) throw ValidationError("fit: budget must be at least 1");
    if (static_cast<int>(init.size()) != family.param_count)
        throw ValidationError("fit: expected " + std::to_string(family.param_count) +
                              " parameters, got " + std::to_string(init.size()));

    auto eval = [&](const std::vector<double>& theta) { return loss(bs, family, theta, data, regions); };

    std::vector<double> theta = init;
    double current = eval(theta);
    if (!std::isfinite(current)) throw NumericalError("fit: loss is not finite at the initial point");

    FitResult result;
    result.trace.push_back(current);
    const int p = family.param_count;

    for (int iter = 0; iter < budget; ++iter) {
        // central-difference gradient; out-of-domain probes fall back to
        // one-sided differences via the finite values that remain
        std::vector<double> grad(static_cast<size_t>(p), 0.0);
        double gnorm = 0.0;
        for (int i = 0; i < p; ++i) {
            const double h = 1e-6 * (1.0 + std::abs(theta[static_cast<size_t>(i)]));
            std::vector<double> hi = theta, lo = theta;
            hi[static_cast<size_t>(i)] += h;
            lo[static_cast<size_t>(i)] -= h;
            double fhi, flo;
            try {
                fhi = eval(hi);
            } catch (const ValidationError&) {
                fhi = current;
                hi = theta;
            }
            try {
                flo = eval(lo);
            } catch (const ValidationError&) {
                flo = current;
                lo = theta;
            }
            const double span = hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)];
            grad[static_cast<size_t>(i)] = span > 0.0 ? (fhi - flo) / span : 0.0;
            gnorm += grad[static_cast<size_t>(i)] * grad[static_cast<size_t>(i)];
        }
        if (gnorm == 0.0) {
            result.converged = true;
            break;
        }

        double step = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= 20; ++halving) {
            std::vector<double> trial = theta;
            for (int i = 0; i < p; ++i) trial[static_cast<size_t>(i)] -= step * grad[static_cast<size_t>(i)];
            double value;
            try {
                value = eval(trial);
            } catch (const ValidationError&) {
                value = std::numeric_limits<double>::infinity();
            }
            if (std::isfinite(value) && value < current) {
                const double improvement = current - value;
                theta = std::move(trial);
                current = value;
                result.trace.push_back(current);
                accepted = true;
                if (improvement < 1e-10 * std::max(current, 1e-300)) result.converged = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            result.converged = true; // no descent within 20 halvings
            break;
        }
        if (result.converged) break;
    }

    result.theta = std::move(theta);
    result.final_loss = current;
    return result;
}

} // namespace lgsp
