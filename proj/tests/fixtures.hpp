#pragma once

// Shared test fixtures: the two-node moving example used throughout the
// suite, its closed-form eigenstructure, and small seeded generators for
// property tests over random kernels and signals.

#include "lgsp/calculus.hpp"
#include "lgsp/kernel.hpp"
#include "lgsp/spectral.hpp"
#include "lgsp/transform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace fix {

using lgsp::Complex;
using lgsp::KernelSequence;
using lgsp::MatrixXcd;
using lgsp::Signal;
using lgsp::VectorXcd;

inline constexpr double kPi = std::numbers::pi;

/// Two-node moving example: a directed pair whose edge weights cycle
/// with period three and two, plus a self-loop of weight 2/5 one step
/// back. Symbol
///   S(w) = [[0.4 e^{2 pi i w}, -1 + 0.6 e^{6 pi i w}],
///           [-1 + 0.8 e^{4 pi i w}, 0.4 e^{2 pi i w}]].
inline KernelSequence example_kernel() {
    MatrixXcd k0 = MatrixXcd::Zero(2, 2);
    k0(0, 1) = -1.0;
    k0(1, 0) = -1.0;
    MatrixXcd k1 = 0.4 * MatrixXcd::Identity(2, 2);
    MatrixXcd k2 = MatrixXcd::Zero(2, 2);
    k2(1, 0) = 0.8;
    MatrixXcd k3 = MatrixXcd::Zero(2, 2);
    k3(0, 1) = 0.6;
    return KernelSequence::from_taps(2, {{0, k0}, {1, k1}, {2, k2}, {3, k3}});
}

/// Off-diagonal symbol entries of the example.
inline Complex example_b(double w) {
    return -1.0 + 0.6 * std::exp(Complex(0.0, 6.0 * kPi * w));
}
inline Complex example_c(double w) {
    return -1.0 + 0.8 * std::exp(Complex(0.0, 4.0 * kPi * w));
}

/// Principal square root of b(w) c(w). The radicand is the product of
/// 1 - 0.6 e^{6 pi i w} and 1 - 0.8 e^{4 pi i w} (both with strictly
/// positive real part, |arg| bounded by arcsin 0.6 and arcsin 0.8), so
/// its argument stays within [-pi/2, pi/2] and the principal branch is
/// continuous around the whole frequency circle.
inline Complex example_root(double w) {
    return std::sqrt(example_b(w) * example_c(w));
}

/// Closed-form eigenvalue branches, + first. At w = 0 these evaluate to
/// 0.4 +- sqrt(0.08), approximately 0.682843 and 0.117157.
inline std::pair<Complex, Complex> example_lambda(double w) {
    const Complex d = 0.4 * std::exp(Complex(0.0, 2.0 * kPi * w));
    const Complex r = example_root(w);
    return {d + r, d - r};
}

/// Closed-form spectral projections, sign = +1 or -1:
///   P_{+-}(w) = 1/2 [[1, +- b/r], [+- c/r, 1]],  r = sqrt(b c).
/// The two off-diagonal entries multiply to 1/4 for either sign.
inline MatrixXcd example_projection(double w, int sign) {
    const Complex b = example_b(w);
    const Complex c = example_c(w);
    const Complex r = example_root(w);
    MatrixXcd p(2, 2);
    p(0, 0) = 0.5;
    p(1, 1) = 0.5;
    p(0, 1) = 0.5 * static_cast<double>(sign) * b / r;
    p(1, 0) = 0.5 * static_cast<double>(sign) * c / r;
    return p;
}

/// Aggregated spatial coupling of the example: W = sum of the taps.
inline MatrixXcd example_w() {
    MatrixXcd w(2, 2);
    w << 0.4, -0.4, -0.2, 0.4;
    return w;
}

/// Product-model branches: unit circles translated by the eigenvalues
/// of W, (2 +- sqrt 2)/5.
inline Complex product_lambda(double w, int sign) {
    const double shift = (2.0 + static_cast<double>(sign) * std::sqrt(2.0)) / 5.0;
    return std::exp(Complex(0.0, 2.0 * kPi * w)) + shift;
}

/// Frequency-independent product-model projections
///   (P0)_{+-} = 1/2 [[1, -+ sqrt 2], [-+ 1/sqrt 2, 1]].
inline MatrixXcd product_projection(int sign) {
    const double s = static_cast<double>(sign);
    MatrixXcd p(2, 2);
    p << 0.5, -s * std::sqrt(2.0) / 2.0, -s / (2.0 * std::sqrt(2.0)), 0.5;
    return p;
}

/// Deterministic random source for property tests. Gaussian variates
/// come from an explicit Box-Muller transform so the draw sequence is
/// pinned by the seed alone, not by any library distribution.
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in (0, 1].
    double uniform() { return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53; }

    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double normal() {
        const double u = uniform();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * v);
    }

    /// Circularly symmetric complex normal with unit variance.
    Complex cnormal() {
        const double s = 1.0 / std::sqrt(2.0);
        return {s * normal(), s * normal()};
    }

private:
    std::mt19937_64 gen_;
};

/// Random kernel with dense complex taps on every offset in [lo, hi].
inline KernelSequence random_kernel(TestRng& rng, int n, int lo, int hi) {
    std::vector<std::pair<int, MatrixXcd>> taps;
    for (int t = lo; t <= hi; ++t) {
        MatrixXcd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.cnormal();
        taps.emplace_back(t, m);
    }
    return KernelSequence::from_taps(n, taps);
}

/// Random signal with dense complex samples on [start, start + len).
inline Signal random_signal(TestRng& rng, int n, int start, int len) {
    std::vector<VectorXcd> samples;
    samples.reserve(static_cast<size_t>(len));
    for (int t = 0; t < len; ++t) {
        VectorXcd v(n);
        for (int i = 0; i < n; ++i) v(i) = rng.cnormal();
        samples.push_back(v);
    }
    return Signal(n, start, std::move(samples));
}

/// Largest violation of the algebraic branch conditions against the
/// symbol table: resolution of identity, mutual orthogonality with
/// idempotence, nilpotency, and reconstruction, checked at every grid
/// point in the spectral norm.
inline double max_branch_violation(const lgsp::BranchSet& bs, const lgsp::FrequencyTable& table) {
    const int n = bs.n;
    const MatrixXcd eye = MatrixXcd::Identity(n, n);
    double worst = 0.0;
    for (int j = 0; j < bs.grid.size; ++j) {
        MatrixXcd psum = MatrixXcd::Zero(n, n);
        for (int k = 0; k < bs.branch_count(); ++k) psum += bs.projection[k][j];
        worst = std::max(worst, lgsp::spectral_norm(psum - eye));
        for (int k = 0; k < bs.branch_count(); ++k) {
            const MatrixXcd& pk = bs.projection[k][j];
            const MatrixXcd& nk = bs.nilpotent[k][j];
            for (int l = 0; l < bs.branch_count(); ++l) {
                const MatrixXcd prod = pk * bs.projection[l][j];
                worst = std::max(worst, lgsp::spectral_norm(l == k ? prod - pk : prod));
            }
            MatrixXcd power = nk;
            for (int i = 1; i < n; ++i) power = power * nk;
            worst = std::max(worst, lgsp::spectral_norm(power));
            worst = std::max(worst, lgsp::spectral_norm(nk - pk * nk * pk));
        }
        worst = std::max(worst, lgsp::spectral_norm(bs.reconstruct(j) - table.values[j]));
    }
    return worst;
}

/// Largest entry magnitude over the signal's window.
inline double signal_sup(const Signal& x) {
    double sup = 0.0;
    for (int t = x.start(); t < x.end(); ++t)
        sup = std::max(sup, x.at(t).cwiseAbs().maxCoeff());
    return sup;
}

/// Normalized correlation |<x, y>| / (|x| |y|) over the union of the
/// two supports; zero when either signal vanishes.
inline double normalized_correlation(const Signal& x, const Signal& y) {
    Complex inner = 0.0;
    double nx = 0.0;
    double ny = 0.0;
    const int start = std::min(x.start(), y.start());
    const int stop = std::max(x.end(), y.end());
    for (int t = start; t < stop; ++t) {
        const VectorXcd a = x.at(t);
        const VectorXcd b = y.at(t);
        inner += a.dot(b);
        nx += a.squaredNorm();
        ny += b.squaredNorm();
    }
    if (nx <= 0.0 || ny <= 0.0) return 0.0;
    return std::abs(inner) / std::sqrt(nx * ny);
}

} // namespace fix
