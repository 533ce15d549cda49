#include "lgsp/product.hpp"

#include "lgsp/errors.hpp"
#include "lgsp/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace lgsp {

namespace {

double projection_variation(const BranchSet& bs) {
    double worst = 0.0;
    for (int k = 0; k < bs.branch_count(); ++k) {
        const auto& ps = bs.projection[static_cast<size_t>(k)];
        MatrixXcd mean = MatrixXcd::Zero(bs.n, bs.n);
        for (const auto& p : ps) mean += p;
        mean /= static_cast<double>(ps.size());
        for (const auto& p : ps) worst = std::max(worst, spectral_norm(p - mean));
    }
    return worst;
}

double bandpass_variation(const BranchSet& bs) {
    const int m = bs.grid.size;
    const VectorXcd u = VectorXcd::Constant(bs.n, 1.0 / std::sqrt(static_cast<double>(bs.n)));
    double worst = 0.0;
    for (int k = 0; k < bs.branch_count(); ++k) {
        std::vector<VectorXcd> dirs;
        for (int p = 0; p < 8; ++p) {
            VectorXcd v = bs.projection[static_cast<size_t>(k)][static_cast<size_t>(p * m / 8)] * u;
            const double norm = v.norm();
            if (norm > 1e-12) dirs.push_back(v / norm);
        }
        if (dirs.empty()) continue;
        VectorXcd mean = VectorXcd::Zero(bs.n);
        for (const auto& d : dirs) mean += d;
        mean /= static_cast<double>(dirs.size());
        for (const auto& d : dirs) worst = std::max(worst, (d - mean).norm());
    }
    return worst;
}

} // namespace

KernelSequence product_generator(const KernelSequence& k) {
    const int n = k.node_count();
    MatrixXcd w = MatrixXcd::Zero(n, n);
    for (const auto& [t, m] : k.taps()) w += m;
    return KernelSequence::from_taps(n, {{0, w}, {1, MatrixXcd::Identity(n, n)}});
}

ComparisonReport compare_models(const KernelSequence& k, const FrequencyGrid& grid, double delta) {
    if (grid.size % 8 != 0)
        throw ValidationError("compare_models: grid size must be divisible by 8");

    ComparisonReport report;
    report.grid_size = grid.size;
    report.delta = delta;

    const BranchSet bs = track_branches(symbol(k, grid));
    const BranchSet bs0 = track_branches(symbol(product_generator(k), grid));
    const RegionSet regions = detect_regions(spectrum_locus(bs), delta);
    const RegionSet regions0 = detect_regions(spectrum_locus(bs0), delta);

    report.model_clusters = regions.cluster_count();
    report.product_clusters = regions0.cluster_count();
    report.model_separation = regions.separation;
    report.product_separation = regions0.separation;
    report.model_projection_variation = projection_variation(bs);
    report.product_projection_variation = projection_variation(bs0);
    report.model_bandpass_variation = bandpass_variation(bs);
    report.product_bandpass_variation = bandpass_variation(bs0);
    return report;
}

} // namespace lgsp
