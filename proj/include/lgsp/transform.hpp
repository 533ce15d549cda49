#pragma once

#include "lgsp/kernel.hpp"

namespace lgsp {

/// Uniform samples omega_j = j / M of the unit frequency torus.
struct FrequencyGrid {
    int size = 1;

    FrequencyGrid() = default;
    explicit FrequencyGrid(int m);

    double omega(int j) const { return static_cast<double>(j) / size; }

    /// Smallest power-of-two grid that can hold a window of the given
    /// length without wrap-around.
    static FrequencyGrid for_length(int length);

    bool operator==(const FrequencyGrid&) const = default;
};

/// Per-grid-point n x n matrix values, e.g. the symbol of a kernel.
struct FrequencyTable {
    FrequencyGrid grid;
    std::vector<MatrixXcd> values;  // one per grid point

    int node_count() const { return static_cast<int>(values.front().rows()); }
};

/// Per-grid-point complex n-vector values.
struct FrequencySignal {
    FrequencyGrid grid;
    std::vector<VectorXcd> values;

    int node_count() const { return static_cast<int>(values.front().size()); }
};

/// Symbol of a kernel on the grid: S_hat(omega_j) = sum_t e^{2 pi i omega_j t} K_t.
/// The forward transform uses the e^{+2 pi i omega t} convention throughout.
FrequencyTable symbol(const KernelSequence& k, const FrequencyGrid& grid);

/// x_hat(omega_j) = sum_t e^{2 pi i omega_j t} x[t].
FrequencySignal dtft(const Signal& x, const FrequencyGrid& grid);

/// Point evaluation of the transform at an arbitrary frequency.
VectorXcd dtft_at(const Signal& x, double omega);

/// Inverse transform onto a declared window:
/// x[t] = (1/M) sum_j e^{-2 pi i omega_j t} x_hat(omega_j).
/// The window is declared by the caller; M < window length aliases and
/// is rejected.
Signal idtft(const FrequencySignal& xhat, Window support);

/// Frequency-domain operator action. Requires
/// M >= kernel support length + signal length - 1 so the pointwise
/// product realizes linear, not circular, convolution.
Signal apply_frequency_domain(const KernelSequence& k, const Signal& x, const FrequencyGrid& grid);

/// Apply a per-frequency matrix table to x and invert onto the window.
Signal apply_table(const FrequencyTable& table, const Signal& x, Window out);

/// Grid-sampled stand-in for the operator sup-norm: max over grid
/// points of the spectral norm of the symbol. Zero iff the kernel is
/// zero on the grid.
double operator_norm_proxy(const KernelSequence& k, const FrequencyGrid& grid);

/// Largest singular value.
double spectral_norm(const MatrixXcd& m);

} // namespace lgsp
