#include "lgsp/transform.hpp"

#include "lgsp/errors.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

namespace lgsp {

namespace {

Complex unit_phase(double turns) {
    const double a = 2.0 * std::numbers::pi * turns;
    return {std::cos(a), std::sin(a)};
}

} // namespace

FrequencyGrid::FrequencyGrid(int m) : size(m) {
    if (m < 1) throw ValidationError("frequency grid: size must be >= 1");
}

FrequencyGrid FrequencyGrid::for_length(int length) {
    int m = 1;
    while (m < length) m *= 2;
    return FrequencyGrid(m);
}

FrequencyTable symbol(const KernelSequence& k, const FrequencyGrid& grid) {
    std::vector<MatrixXcd> values;
    values.reserve(static_cast<size_t>(grid.size));
    const int n = k.node_count();
    for (int j = 0; j < grid.size; ++j) {
        MatrixXcd v = MatrixXcd::Zero(n, n);
        for (const auto& [t, m] : k.taps()) v += unit_phase(grid.omega(j) * t) * m;
        values.push_back(std::move(v));
    }
    return {grid, std::move(values)};
}

FrequencySignal dtft(const Signal& x, const FrequencyGrid& grid) {
    std::vector<VectorXcd> values;
    values.reserve(static_cast<size_t>(grid.size));
    for (int j = 0; j < grid.size; ++j) values.push_back(dtft_at(x, grid.omega(j)));
    return {grid, std::move(values)};
}

VectorXcd dtft_at(const Signal& x, double omega) {
    VectorXcd v = VectorXcd::Zero(x.node_count());
    for (int s = 0; s < x.size(); ++s)
        v += unit_phase(omega * (x.start() + s)) * x.samples()[static_cast<size_t>(s)];
    return v;
}

Signal idtft(const FrequencySignal& xhat, Window support) {
    const int m = xhat.grid.size;
    if (m < support.length)
        throw NumericalError("idtft: window length " + std::to_string(support.length) +
                             " exceeds grid size " + std::to_string(m) + " (aliasing)");
    const int n = xhat.node_count();
    std::vector<VectorXcd> out;
    out.reserve(static_cast<size_t>(std::max(support.length, 0)));
    for (int t = support.start; t < support.start + support.length; ++t) {
        VectorXcd v = VectorXcd::Zero(n);
        for (int j = 0; j < m; ++j) v += unit_phase(-xhat.grid.omega(j) * t) * xhat.values[static_cast<size_t>(j)];
        out.push_back(v / static_cast<double>(m));
    }
    return Signal(n, support.start, std::move(out));
}

Signal apply_frequency_domain(const KernelSequence& k, const Signal& x, const FrequencyGrid& grid) {
    if (k.node_count() != x.node_count())
        throw ValidationError("apply_frequency_domain: node count mismatch");
    if (k.is_zero() || x.size() == 0)
        return Signal::zero(x.node_count(), {x.start(), 0});
    const int out_len = k.support_length() + x.size() - 1;
    if (grid.size < out_len)
        throw NumericalError("apply_frequency_domain: grid size " + std::to_string(grid.size) +
                             " < output support " + std::to_string(out_len) +
                             " (circular wrap-around)");
    return apply_table(symbol(k, grid), x, {x.start() + k.min_offset(), out_len});
}

Signal apply_table(const FrequencyTable& table, const Signal& x, Window out) {
    if (table.node_count() != x.node_count())
        throw ValidationError("apply_table: node count mismatch");
    FrequencySignal xhat = dtft(x, table.grid);
    for (size_t j = 0; j < xhat.values.size(); ++j)
        xhat.values[j] = table.values[j] * xhat.values[j];
    return idtft(xhat, out);
}

double operator_norm_proxy(const KernelSequence& k, const FrequencyGrid& grid) {
    if (k.is_zero()) return 0.0;
    double best = 0.0;
    for (const auto& v : symbol(k, grid).values) best = std::max(best, spectral_norm(v));
    return best;
}

double spectral_norm(const MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

} // namespace lgsp
