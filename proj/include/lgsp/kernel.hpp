#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace lgsp {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Half-open window of integer time indices [start, start + length).
struct Window {
    int start = 0;
    int length = 0;
};

/// A linear operator on vector sequences given by its finite-support
/// kernel: y[t] = sum_s taps[t - s] * x[s]. Absent offsets act as the
/// zero matrix. Immutable after construction.
class KernelSequence {
public:
    static KernelSequence from_taps(int n, const std::vector<std::pair<int, MatrixXcd>>& taps);

    /// Identity operator on n nodes.
    static KernelSequence identity(int n);

    /// Unit time shift by d steps: taps = {(d, I)}.
    static KernelSequence delay(int n, int d = 1);

    int node_count() const { return n_; }
    const std::map<int, MatrixXcd>& taps() const { return taps_; }

    bool is_zero() const { return taps_.empty(); }
    int min_offset() const;  // requires !is_zero()
    int max_offset() const;
    /// Number of offsets spanned by the support, 0 when zero.
    int support_length() const;

    /// Tap at offset t; zero matrix when absent.
    MatrixXcd tap(int t) const;

private:
    KernelSequence(int n, std::map<int, MatrixXcd> taps) : n_(n), taps_(std::move(taps)) {}
    int n_ = 0;
    std::map<int, MatrixXcd> taps_;
};

/// A finite-support segment of a vector-valued time signal. Samples
/// outside [start, start + size) are zero.
class Signal {
public:
    Signal(int n, int start, std::vector<VectorXcd> samples);

    /// All-zero signal on the given window.
    static Signal zero(int n, Window w);

    /// Unit impulse e_node at the given time.
    static Signal impulse(int n, int node, int t);

    int node_count() const { return n_; }
    int start() const { return start_; }
    int size() const { return static_cast<int>(samples_.size()); }
    /// One past the last stored sample time.
    int end() const { return start_ + size(); }
    Window window() const { return {start_, size()}; }

    const std::vector<VectorXcd>& samples() const { return samples_; }
    /// Sample by absolute time; zero vector outside the stored window.
    VectorXcd at(int t) const;

    /// Sum over t of squared 2-norms.
    double energy() const;

    /// Same samples with the window moved by d.
    Signal shifted(int d) const;

private:
    int n_ = 0;
    int start_ = 0;
    std::vector<VectorXcd> samples_;
};

/// Exact time-domain action y[t] = sum_s taps[t-s] x[s]. The output
/// window is the Minkowski sum of the two supports.
Signal apply_time_domain(const KernelSequence& k, const Signal& x);

/// Operator composition: taps m[t] = sum_s k[s] l[t-s], so that
/// apply(compose(k,l), x) == apply(k, apply(l, x)).
KernelSequence kernel_compose(const KernelSequence& k, const KernelSequence& l);

/// x + y and scalar scaling, aligned by absolute time.
Signal signal_add(const Signal& x, const Signal& y);
Signal signal_scale(Complex a, const Signal& x);

/// max_t |x[t] - y[t]| over the union of supports.
double signal_max_abs_diff(const Signal& x, const Signal& y);

} // namespace lgsp
