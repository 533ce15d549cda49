#pragma once

#include "lgsp/kernel.hpp"
#include "lgsp/transform.hpp"

#include <optional>

namespace lgsp {

/// Side-by-side spectral diagnostics for a generator and its
/// Cartesian-product counterpart. The variation metrics quantify the
/// qualitative claim that product-model projections are frequency
/// blind: each is a max over branches of the deviation from the grid
/// mean (spectral norm for projections, 2-norm of normalized bandpass
/// directions probed at the eight frequencies j/8).
struct ComparisonReport {
    int grid_size = 0;
    double delta = 0.0;
    int model_clusters = 0;
    int product_clusters = 0;
    std::optional<double> model_separation;
    std::optional<double> product_separation;
    double model_projection_variation = 0.0;
    double product_projection_variation = 0.0;
    double model_bandpass_variation = 0.0;
    double product_bandpass_variation = 0.0;
};

/// Cartesian-product baseline: collapse the kernel to W = sum_t K_t and
/// couple it to the unit time shift, giving taps {0: W, 1: I} whose
/// symbol is e^{2 pi i omega} I + W.
KernelSequence product_generator(const KernelSequence& k);

/// Run the full spectral pipeline on k and product_generator(k) and
/// report cluster counts, separations, and variation metrics. The grid
/// size must be divisible by 8 so the probe frequencies j/8 lie on it.
ComparisonReport compare_models(const KernelSequence& k, const FrequencyGrid& grid, double delta);

} // namespace lgsp
