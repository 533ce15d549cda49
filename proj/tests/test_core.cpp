// Kernels, signals, exact time-domain application, and composition.

#include "fixtures.hpp"
#include "lgsp/errors.hpp"
#include "lgsp/kernel.hpp"

#include <doctest.h>

#include <map>
#include <utility>
#include <vector>

using namespace lgsp;

namespace {

/// Brute-force composition oracle: materialize both operators as one
/// large block matrix acting on times [-span, span], multiply, and read
/// the taps back off the first block column. The window is padded far
/// enough that truncation cannot touch the returned offsets.
std::map<int, MatrixXcd> block_matrix_compose(const KernelSequence& k, const KernelSequence& l) {
    const int n = k.node_count();
    const int span = 2 * (std::max(std::abs(k.min_offset()), std::abs(k.max_offset())) +
                          std::max(std::abs(l.min_offset()), std::abs(l.max_offset()))) +
                     2;
    const int dim = n * (2 * span + 1);
    MatrixXcd a = MatrixXcd::Zero(dim, dim);
    MatrixXcd b = MatrixXcd::Zero(dim, dim);
    for (int row = -span; row <= span; ++row) {
        for (int col = -span; col <= span; ++col) {
            a.block(n * (row + span), n * (col + span), n, n) = k.tap(row - col);
            b.block(n * (row + span), n * (col + span), n, n) = l.tap(row - col);
        }
    }
    const MatrixXcd c = a * b;
    std::map<int, MatrixXcd> taps;
    for (int t = -span / 2; t <= span / 2; ++t) {
        const MatrixXcd block = c.block(n * (t + span), n * span, n, n);
        if (block.cwiseAbs().maxCoeff() > 1e-14) taps[t] = block;
    }
    return taps;
}

} // namespace

TEST_CASE("kernel construction and accessors") {
    const KernelSequence id = KernelSequence::identity(3);
    CHECK(id.node_count() == 3);
    CHECK(id.support_length() == 1);
    CHECK((id.tap(0) - MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(id.tap(5).cwiseAbs().maxCoeff() == 0.0);

    const KernelSequence ex = fix::example_kernel();
    CHECK(ex.min_offset() == 0);
    CHECK(ex.max_offset() == 3);
    CHECK(ex.support_length() == 4);

    CHECK_THROWS_AS(KernelSequence::from_taps(
                        2, {{0, MatrixXcd::Identity(2, 2)}, {0, MatrixXcd::Identity(2, 2)}}),
                    ValidationError);
    CHECK_THROWS_AS(KernelSequence::from_taps(2, {{0, MatrixXcd::Identity(3, 3)}}),
                    ValidationError);
}

TEST_CASE("signal accessors and window bookkeeping") {
    const Signal x = Signal::impulse(2, 0, 4);
    CHECK(x.start() == 4);
    CHECK(x.size() == 1);
    CHECK(x.at(4)(0) == Complex(1.0, 0.0));
    CHECK(x.at(3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(x.energy() == 1.0);

    const Signal y = x.shifted(-2);
    CHECK(y.start() == 2);
    CHECK(signal_max_abs_diff(x, y.shifted(2)) == 0.0);
}

TEST_CASE("time-domain application: identity, pinned example columns, delay") {
    fix::TestRng rng(11);
    const Signal x = fix::random_signal(rng, 2, -3, 6);
    CHECK(signal_max_abs_diff(apply_time_domain(KernelSequence::identity(2), x), x) == 0.0);

    // Unit impulse at node 0, t = 0: the output samples at t = 0..3 are
    // the first columns of the four taps.
    const Signal out = apply_time_domain(fix::example_kernel(), Signal::impulse(2, 0, 0));
    CHECK(out.at(0)(0) == Complex(0.0));
    CHECK(out.at(0)(1) == Complex(-1.0));
    CHECK(out.at(1)(0) == Complex(0.4));
    CHECK(out.at(1)(1) == Complex(0.0));
    CHECK(out.at(2)(0) == Complex(0.0));
    CHECK(out.at(2)(1) == Complex(0.8));
    CHECK(out.at(3)(0) == Complex(0.0));
    CHECK(out.at(3)(1) == Complex(0.0));

    const Signal delayed = apply_time_domain(KernelSequence::delay(2), x);
    CHECK(delayed.start() == x.start() + 1);
    CHECK(signal_max_abs_diff(delayed, x.shifted(1)) == 0.0);
}

TEST_CASE("composition: identity, delays, block-matrix oracle") {
    const KernelSequence ex = fix::example_kernel();
    const KernelSequence idc = kernel_compose(KernelSequence::identity(2), ex);
    CHECK(idc.taps().size() == ex.taps().size());
    for (const auto& [t, m] : ex.taps())
        CHECK((idc.tap(t) - m).cwiseAbs().maxCoeff() == 0.0);

    const KernelSequence dd = kernel_compose(KernelSequence::delay(2), KernelSequence::delay(2));
    CHECK(dd.taps().size() == 1);
    CHECK((dd.tap(2) - MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

    const KernelSequence sq = kernel_compose(ex, ex);
    const auto oracle = block_matrix_compose(ex, ex);
    CHECK(sq.taps().size() == oracle.size());
    for (const auto& [t, m] : oracle)
        CHECK((sq.tap(t) - m).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("composition distributes over application on random operators") {
    fix::TestRng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(1, 6);
        const KernelSequence k = fix::random_kernel(rng, n, rng.uniform_int(-3, 0), 2);
        const KernelSequence l = fix::random_kernel(rng, n, rng.uniform_int(-2, 0), 3);
        const Signal x = fix::random_signal(rng, n, rng.uniform_int(-4, 4), rng.uniform_int(1, 6));

        const Signal direct = apply_time_domain(kernel_compose(k, l), x);
        const Signal staged = apply_time_domain(k, apply_time_domain(l, x));
        double scale = 0.0;
        for (const auto& s : direct.samples()) scale = std::max(scale, s.cwiseAbs().maxCoeff());
        CHECK(signal_max_abs_diff(direct, staged) < 1e-12 * std::max(1.0, scale));

        const auto oracle = block_matrix_compose(k, l);
        const KernelSequence composed = kernel_compose(k, l);
        for (const auto& [t, m] : oracle)
            CHECK((composed.tap(t) - m).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("application is linear") {
    fix::TestRng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rng.uniform_int(1, 4);
        const KernelSequence k = fix::random_kernel(rng, n, -1, 2);
        const Signal x = fix::random_signal(rng, n, -2, 4);
        const Signal y = fix::random_signal(rng, n, 0, 3);
        const Complex a = rng.cnormal();
        const Complex b = rng.cnormal();

        const Signal lhs = apply_time_domain(k, signal_add(signal_scale(a, x), signal_scale(b, y)));
        const Signal rhs = signal_add(signal_scale(a, apply_time_domain(k, x)),
                                      signal_scale(b, apply_time_domain(k, y)));
        CHECK(signal_max_abs_diff(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("application commutes with time shifts exactly") {
    fix::TestRng rng(41);
    const KernelSequence k = fix::random_kernel(rng, 3, -2, 3);
    const Signal x = fix::random_signal(rng, 3, -1, 5);
    for (int d : {-7, -1, 0, 2, 9}) {
        const Signal lhs = apply_time_domain(k, x.shifted(d));
        const Signal rhs = apply_time_domain(k, x).shifted(d);
        CHECK(signal_max_abs_diff(lhs, rhs) == 0.0);
    }
}
