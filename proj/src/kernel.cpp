#include "lgsp/kernel.hpp"

#include "lgsp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lgsp {

KernelSequence KernelSequence::from_taps(int n, const std::vector<std::pair<int, MatrixXcd>>& taps) {
    if (n <= 0) throw ValidationError("kernel: node count must be positive");
    std::map<int, MatrixXcd> stored;
    for (const auto& [t, m] : taps) {
        if (m.rows() != n || m.cols() != n)
            throw ValidationError("kernel: tap at offset " + std::to_string(t) + " is not " +
                                  std::to_string(n) + "x" + std::to_string(n));
        if (stored.count(t)) throw ValidationError("kernel: duplicate offset " + std::to_string(t));
        if (m.norm() == 0.0) continue;  // canonical form stores only nonzero taps
        stored.emplace(t, m);
    }
    return KernelSequence(n, std::move(stored));
}

KernelSequence KernelSequence::identity(int n) {
    return from_taps(n, {{0, MatrixXcd::Identity(n, n)}});
}

KernelSequence KernelSequence::delay(int n, int d) {
    return from_taps(n, {{d, MatrixXcd::Identity(n, n)}});
}

int KernelSequence::min_offset() const { return taps_.begin()->first; }
int KernelSequence::max_offset() const { return taps_.rbegin()->first; }

int KernelSequence::support_length() const {
    return taps_.empty() ? 0 : max_offset() - min_offset() + 1;
}

MatrixXcd KernelSequence::tap(int t) const {
    auto it = taps_.find(t);
    return it == taps_.end() ? MatrixXcd::Zero(n_, n_) : it->second;
}

Signal::Signal(int n, int start, std::vector<VectorXcd> samples)
    : n_(n), start_(start), samples_(std::move(samples)) {
    if (n <= 0) throw ValidationError("signal: node count must be positive");
    for (const auto& v : samples_)
        if (v.size() != n) throw ValidationError("signal: sample dimension mismatch");
}

Signal Signal::zero(int n, Window w) {
    return Signal(n, w.start, std::vector<VectorXcd>(std::max(w.length, 0), VectorXcd::Zero(n)));
}

Signal Signal::impulse(int n, int node, int t) {
    if (node < 0 || node >= n) throw ValidationError("signal: impulse node out of range");
    VectorXcd e = VectorXcd::Zero(n);
    e(node) = 1.0;
    return Signal(n, t, {e});
}

VectorXcd Signal::at(int t) const {
    if (t < start_ || t >= end()) return VectorXcd::Zero(n_);
    return samples_[static_cast<size_t>(t - start_)];
}

double Signal::energy() const {
    double e = 0.0;
    for (const auto& v : samples_) e += v.squaredNorm();
    return e;
}

Signal Signal::shifted(int d) const { return Signal(n_, start_ + d, samples_); }

Signal apply_time_domain(const KernelSequence& k, const Signal& x) {
    if (k.node_count() != x.node_count())
        throw ValidationError("apply_time_domain: node count mismatch");
    if (k.is_zero() || x.size() == 0)
        return Signal::zero(x.node_count(), {x.start(), 0});

    const int out_start = x.start() + k.min_offset();
    const int out_len = x.size() + k.support_length() - 1;
    std::vector<VectorXcd> out(static_cast<size_t>(out_len), VectorXcd::Zero(x.node_count()));
    for (const auto& [t, m] : k.taps()) {
        for (int s = 0; s < x.size(); ++s)
            out[static_cast<size_t>(t - k.min_offset() + s)] += m * x.samples()[static_cast<size_t>(s)];
    }
    return Signal(x.node_count(), out_start, std::move(out));
}

KernelSequence kernel_compose(const KernelSequence& k, const KernelSequence& l) {
    if (k.node_count() != l.node_count())
        throw ValidationError("kernel_compose: node count mismatch");
    const int n = k.node_count();
    if (k.is_zero() || l.is_zero()) return KernelSequence::from_taps(n, {});

    std::map<int, MatrixXcd> acc;
    for (const auto& [s, km] : k.taps())
        for (const auto& [u, lm] : l.taps()) {
            auto [it, fresh] = acc.try_emplace(s + u, MatrixXcd::Zero(n, n));
            it->second += km * lm;
        }
    std::vector<std::pair<int, MatrixXcd>> taps(acc.begin(), acc.end());
    return KernelSequence::from_taps(n, taps);
}

Signal signal_add(const Signal& x, const Signal& y) {
    if (x.node_count() != y.node_count()) throw ValidationError("signal_add: dimension mismatch");
    if (x.size() == 0) return y;
    if (y.size() == 0) return x;
    const int start = std::min(x.start(), y.start());
    const int stop = std::max(x.end(), y.end());
    std::vector<VectorXcd> out;
    out.reserve(static_cast<size_t>(stop - start));
    for (int t = start; t < stop; ++t) out.push_back(x.at(t) + y.at(t));
    return Signal(x.node_count(), start, std::move(out));
}

Signal signal_scale(Complex a, const Signal& x) {
    std::vector<VectorXcd> out;
    out.reserve(x.samples().size());
    for (const auto& v : x.samples()) out.push_back(a * v);
    return Signal(x.node_count(), x.start(), std::move(out));
}

double signal_max_abs_diff(const Signal& x, const Signal& y) {
    if (x.node_count() != y.node_count())
        throw ValidationError("signal_max_abs_diff: dimension mismatch");
    if (x.size() == 0 && y.size() == 0) return 0.0;
    const int start = std::min(x.size() ? x.start() : y.start(), y.size() ? y.start() : x.start());
    const int stop = std::max(x.size() ? x.end() : y.end(), y.size() ? y.end() : x.end());
    double m = 0.0;
    for (int t = start; t < stop; ++t)
        m = std::max(m, (x.at(t) - y.at(t)).cwiseAbs().maxCoeff());
    return m;
}

} // namespace lgsp
