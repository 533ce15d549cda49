#pragma once

#include "lgsp/calculus.hpp"
#include "lgsp/kernel.hpp"
#include "lgsp/spectral.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace lgsp {

/// Observed input/output signal pairs sharing one node count.
struct Dataset {
    std::vector<std::pair<Signal, Signal>> pairs;
};

/// A parameter vector theta mapped to a concrete PhiSpec. Complex
/// parameters occupy two consecutive real slots. build may reject theta
/// outside the family's domain (e.g. sigma <= 0).
struct PhiFamily {
    std::string name;
    int param_count = 0;
    std::function<PhiSpec(const std::vector<double>&)> build;
};

/// theta = [a_0 .. a_degree], real polynomial coefficients on region.
PhiFamily polynomial_family(int degree, RegionSelector region);

/// theta = [mu_re, mu_im, sigma]: one Gaussian bump on region.
PhiFamily gaussian_family(RegionSelector region);

/// theta = [mu_plus_re, mu_plus_im, mu_minus_re, mu_minus_im]: two
/// Gaussian bumps with a fixed shared width, one per region.
PhiFamily two_gaussian_family(RegionSelector plus, RegionSelector minus, double sigma);

struct FitResult {
    std::vector<double> theta;
    double final_loss = 0.0;
    std::vector<double> trace; // loss at init, then after each accepted step
    bool converged = false;
};

/// Mean over pairs of the squared residual sum_t |(A_theta x)[t] - y[t]|^2,
/// with A_theta the spectral application of family(theta) along the
/// branches and the residual evaluated on each pair's target window.
double loss(const BranchSet& bs, const PhiFamily& family, const std::vector<double>& theta,
            const Dataset& data, const RegionSet* regions = nullptr);

/// Coordinate-wise central finite-difference gradient descent with
/// backtracking line search (step halved until decrease, at most 20
/// halvings). Stops when the budget is exhausted or an accepted step
/// improves the loss by less than 1e-10 relative. The branch
/// decomposition is fixed throughout; only theta moves.
FitResult fit(const BranchSet& bs, const PhiFamily& family, const Dataset& data,
              const std::vector<double>& init, int budget, const RegionSet* regions = nullptr);

} // namespace lgsp
