// Per-point spectral decomposition, resolvent projections, branch
// tracking across the grid, and locus clustering.

#include "fixtures.hpp"
#include "lgsp/errors.hpp"
#include "lgsp/product.hpp"
#include "lgsp/spectral.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <tuple>
#include <vector>

using namespace lgsp;

namespace {

FrequencyTable constant_table(const MatrixXcd& m, int grid_size) {
    FrequencyTable t;
    t.grid = FrequencyGrid(grid_size);
    t.values.assign(static_cast<size_t>(grid_size), m);
    return t;
}

/// Index of the branch whose value at grid point 0 is nearest to z.
int branch_near(const BranchSet& bs, Complex z) {
    int best = 0;
    double dist = std::abs(bs.lambda[0][0] - z);
    for (int k = 1; k < bs.branch_count(); ++k) {
        const double d = std::abs(bs.lambda[k][0] - z);
        if (d < dist) {
            dist = d;
            best = k;
        }
    }
    return best;
}

} // namespace

TEST_CASE("decompose_point: pinned example value at omega = 0") {
    const FrequencyTable table = symbol(fix::example_kernel(), FrequencyGrid(8));
    const PointDecomposition dec = decompose_point(table.values[0]);
    REQUIRE(dec.count() == 2);

    // Clusters are ordered by descending real part: + first.
    const double root = std::sqrt(0.08);
    CHECK(std::abs(dec.eigenvalues[0] - Complex(0.4 + root)) < 1e-12);
    CHECK(std::abs(dec.eigenvalues[1] - Complex(0.4 - root)) < 1e-12);
    CHECK(std::abs(dec.eigenvalues[0] - Complex(0.682843)) < 1e-6);
    CHECK(std::abs(dec.eigenvalues[1] - Complex(0.117157)) < 1e-6);

    CHECK(spectral_norm(dec.projections[0] - fix::example_projection(0.0, +1)) < 1e-10);
    CHECK(spectral_norm(dec.projections[1] - fix::example_projection(0.0, -1)) < 1e-10);
    CHECK(spectral_norm(dec.nilpotents[0]) < 1e-12);
    CHECK(spectral_norm(dec.nilpotents[1]) < 1e-12);
    CHECK(dec.multiplicities == std::vector<int>{1, 1});
    CHECK(dec.max_condition_violation(table.values[0]) < 1e-10);
}

TEST_CASE("decompose_point: diagonal, defective, mixed, zero") {
    MatrixXcd d(2, 2);
    d << 1.0, 0.0, 0.0, 2.0;
    const PointDecomposition dd = decompose_point(d);
    REQUIRE(dd.count() == 2);
    CHECK(std::abs(dd.eigenvalues[0] - Complex(2.0)) < 1e-12);
    CHECK(std::abs(dd.eigenvalues[1] - Complex(1.0)) < 1e-12);
    CHECK(spectral_norm(dd.projections[0] - Eigen::Vector2cd(0, 1).asDiagonal().toDenseMatrix()) <
          1e-12);
    CHECK(spectral_norm(dd.projections[1] - Eigen::Vector2cd(1, 0).asDiagonal().toDenseMatrix()) <
          1e-12);

    MatrixXcd j(2, 2);
    j << 0.0, 1.0, 0.0, 0.0;
    const PointDecomposition dj = decompose_point(j);
    REQUIRE(dj.count() == 1);
    CHECK(std::abs(dj.eigenvalues[0]) < 1e-12);
    CHECK(dj.multiplicities[0] == 2);
    CHECK(spectral_norm(dj.projections[0] - MatrixXcd::Identity(2, 2)) < 1e-12);
    CHECK(spectral_norm(dj.nilpotents[0] - j) < 1e-12);
    CHECK(dj.max_condition_violation(j) < 1e-10);

    // A Jordan block next to a simple eigenvalue forces the resolvent
    // fallback (the eigenvector basis is singular) with two clusters.
    MatrixXcd m = MatrixXcd::Zero(3, 3);
    m(0, 1) = 1.0;
    m(2, 2) = 5.0;
    const PointDecomposition dm = decompose_point(m);
    REQUIRE(dm.count() == 2);
    CHECK(std::abs(dm.eigenvalues[0] - Complex(5.0)) < 1e-10);
    CHECK(std::abs(dm.eigenvalues[1]) < 1e-10);
    CHECK(dm.multiplicities == std::vector<int>{1, 2});
    MatrixXcd p0 = MatrixXcd::Zero(3, 3);
    p0(2, 2) = 1.0;
    CHECK(spectral_norm(dm.projections[0] - p0) < 1e-8);
    MatrixXcd n1 = MatrixXcd::Zero(3, 3);
    n1(0, 1) = 1.0;
    CHECK(spectral_norm(dm.nilpotents[1] - n1) < 1e-8);
    CHECK(dm.max_condition_violation(m) < 1e-8);

    const PointDecomposition dz = decompose_point(MatrixXcd::Zero(3, 3));
    REQUIRE(dz.count() == 1);
    CHECK(std::abs(dz.eigenvalues[0]) == 0.0);
    CHECK(spectral_norm(dz.projections[0] - MatrixXcd::Identity(3, 3)) == 0.0);
}

TEST_CASE("decompose_point: explicit tolerance controls clustering") {
    MatrixXcd d(2, 2);
    d << 0.0, 0.0, 0.0, 3.0;
    CHECK(decompose_point(d, 1.0).count() == 2);
    CHECK_FALSE(decompose_point(d, 1.0).merge_warning);

    // A gap between tol and 2 tol is merged conservatively and flagged.
    MatrixXcd close(2, 2);
    close << 0.0, 0.0, 0.0, 1.5;
    const PointDecomposition dc = decompose_point(close, 1.0);
    CHECK(dc.count() == 1);
    CHECK(dc.merge_warning);
    CHECK(dc.multiplicities[0] == 2);

    // Numerically coincident eigenvalues share one projection.
    MatrixXcd rep(2, 2);
    rep << 1.0, 0.0, 0.0, 1.0 + 1e-12;
    const PointDecomposition dr = decompose_point(rep);
    CHECK(dr.count() == 1);
    CHECK(spectral_norm(dr.projections[0] - MatrixXcd::Identity(2, 2)) < 1e-10);
}

TEST_CASE("group_projection: isolated eigenvalue, pinned example, full spectrum") {
    MatrixXcd d(2, 2);
    d << 0.0, 0.0, 0.0, 5.0;
    MatrixXcd p0(2, 2);
    p0 << 1.0, 0.0, 0.0, 0.0;
    CHECK(spectral_norm(group_projection(d, 0.0, 1.0, 32) - p0) < 1e-10);

    const FrequencyTable table = symbol(fix::example_kernel(), FrequencyGrid(8));
    const MatrixXcd proj =
        group_projection(table.values[0], Complex(0.682843), 0.2, 64);
    CHECK(spectral_norm(proj - fix::example_projection(0.0, +1)) < 1e-8);

    CHECK(spectral_norm(group_projection(table.values[0], Complex(0.4), 2.0, 64) -
                        MatrixXcd::Identity(2, 2)) < 1e-10);

    // Idempotence of every resolvent projection.
    for (const MatrixXcd& p : {proj, group_projection(d, 0.0, 1.0, 32)})
        CHECK(spectral_norm(p * p - p) < 1e-8);

    // The circle must enclose something and must not graze an eigenvalue.
    CHECK_THROWS_AS(group_projection(d, Complex(10.0), 1.0, 32), NumericalError);
    CHECK_THROWS_AS(group_projection(d, Complex(0.0), 5.0, 32), NumericalError);
}

TEST_CASE("track_branches: worked example matches the closed form") {
    const int m = 256;
    const FrequencyTable table = symbol(fix::example_kernel(), FrequencyGrid(m));
    const BranchSet bs = track_branches(table);
    REQUIRE(bs.branch_count() == 2);
    CHECK(bs.monodromy_is_identity());
    CHECK_FALSE(bs.merge_warning);

    // Fix labels at omega = 0 (+ has the larger real part there), then
    // hold them across the grid.
    const int plus = branch_near(bs, Complex(0.682843));
    const int minus = 1 - plus;
    double lam_err = 0.0;
    double proj_err = 0.0;
    double offdiag_err = 0.0;
    for (int j = 0; j < m; ++j) {
        const double w = bs.grid.omega(j);
        const auto [lp, lm] = fix::example_lambda(w);
        lam_err = std::max(lam_err, std::abs(bs.lambda[plus][j] - lp));
        lam_err = std::max(lam_err, std::abs(bs.lambda[minus][j] - lm));
        proj_err = std::max(
            proj_err, spectral_norm(bs.projection[plus][j] - fix::example_projection(w, +1)));
        proj_err = std::max(
            proj_err, spectral_norm(bs.projection[minus][j] - fix::example_projection(w, -1)));
        // Internal identity of the closed form: the off-diagonal entries
        // of either projection multiply to exactly 1/4.
        for (int k = 0; k < 2; ++k) {
            const Complex prod = bs.projection[k][j](0, 1) * bs.projection[k][j](1, 0);
            offdiag_err = std::max(offdiag_err, std::abs(prod - Complex(0.25)));
        }
    }
    CHECK(lam_err < 1e-8);
    CHECK(proj_err < 1e-6);
    CHECK(offdiag_err < 1e-10);

    CHECK(fix::max_branch_violation(bs, table) < 1e-8);

    // Branches are holomorphic, so adjacent sampled values move at most
    // sup |dlambda/dw| / m. For this kernel the diagonal contributes
    // 2 pi 0.4 and the root term at most (3.6 pi 1.8 + 1.6 pi 1.6) /
    // (2 sqrt(0.08)), about 53 in total; 80 adds curvature slack.
    CHECK(bs.max_adjacent_jump < 80.0 / m);
    CHECK(bs.min_same_frequency_gap > 0.5);
}

TEST_CASE("track_branches: constant tables and the product model") {
    const BranchSet bc = track_branches(constant_table(
        Eigen::Vector2cd(1.0, 2.0).asDiagonal().toDenseMatrix(), 16));
    REQUIRE(bc.branch_count() == 2);
    CHECK(bc.monodromy_is_identity());
    for (int j = 0; j < 16; ++j) {
        CHECK(std::abs(bc.lambda[0][j] - Complex(2.0)) < 1e-12);
        CHECK(std::abs(bc.lambda[1][j] - Complex(1.0)) < 1e-12);
    }

    const int m = 256;
    const KernelSequence prod = product_generator(fix::example_kernel());
    const BranchSet bp = track_branches(symbol(prod, FrequencyGrid(m)));
    REQUIRE(bp.branch_count() == 2);
    CHECK(bp.monodromy_is_identity());
    const int plus = branch_near(bp, fix::product_lambda(0.0, +1));
    double err = 0.0;
    for (int j = 0; j < m; ++j) {
        const double w = bp.grid.omega(j);
        err = std::max(err, std::abs(bp.lambda[plus][j] - fix::product_lambda(w, +1)));
        err = std::max(err, std::abs(bp.lambda[1 - plus][j] - fix::product_lambda(w, -1)));
    }
    CHECK(err < 1e-8);
}

TEST_CASE("spectrum_locus: translated unit circles and constant points") {
    const KernelSequence prod = product_generator(fix::example_kernel());
    const BranchSet bp = track_branches(symbol(prod, FrequencyGrid(128)));
    const SpectrumLocus locus = spectrum_locus(bp);
    CHECK(locus.branch_count == 2);
    CHECK(static_cast<int>(locus.points.size()) == 2 * 128);

    // Each branch is a unit circle centered on an eigenvalue of W.
    const Complex c_plus = (2.0 + std::sqrt(2.0)) / 5.0;
    const Complex c_minus = (2.0 - std::sqrt(2.0)) / 5.0;
    for (const auto& pt : locus.points) {
        const double r_plus = std::abs(pt.value - c_plus);
        const double r_minus = std::abs(pt.value - c_minus);
        CHECK(std::min(std::abs(r_plus - 1.0), std::abs(r_minus - 1.0)) < 1e-8);
    }

    const BranchSet bc = track_branches(constant_table(
        Eigen::Vector2cd(1.0, 2.0).asDiagonal().toDenseMatrix(), 8));
    std::set<std::pair<double, double>> distinct;
    for (const auto& pt : spectrum_locus(bc).points)
        distinct.insert({pt.value.real(), pt.value.imag()});
    CHECK(distinct.size() == 2);
}

TEST_CASE("detect_regions: separable example, inseparable product, point pair") {
    const int m = 512;
    const double delta = 0.05;
    const BranchSet bs = track_branches(symbol(fix::example_kernel(), FrequencyGrid(m)));
    const RegionSet rs = detect_regions(spectrum_locus(bs), delta);
    REQUIRE(rs.cluster_count() == 2);
    REQUIRE(rs.separation.has_value());
    CHECK(*rs.separation > 0.0);
    CHECK(rs.radius <= delta);
    CHECK(2.0 * rs.radius < *rs.separation);

    // The recorded separation equals an independent dense sampling of
    // the closed-form branch distance on the same grid.
    std::vector<Complex> plus_curve(m), minus_curve(m);
    for (int i = 0; i < m; ++i)
        std::tie(plus_curve[i], minus_curve[i]) = fix::example_lambda(static_cast<double>(i) / m);
    double dense = 1e30;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) dense = std::min(dense, std::abs(plus_curve[i] - minus_curve[j]));
    CHECK(*rs.separation == doctest::Approx(dense).epsilon(1e-9));

    // Stability under grid doubling.
    const BranchSet bs2 = track_branches(symbol(fix::example_kernel(), FrequencyGrid(2 * m)));
    const RegionSet rs2 = detect_regions(spectrum_locus(bs2), delta);
    CHECK(rs2.cluster_count() == 2);
    CHECK(std::abs(*rs2.separation - *rs.separation) < 1e-3);

    // The product model's circles intersect, so they merge at any tube
    // radius, and cluster counts survive refinement for both operators.
    const KernelSequence prod = product_generator(fix::example_kernel());
    for (int pm : {256, 512}) {
        const BranchSet bp = track_branches(symbol(prod, FrequencyGrid(pm)));
        for (double d : {0.05, 0.4}) {
            const RegionSet rp = detect_regions(spectrum_locus(bp), d);
            CHECK(rp.cluster_count() == 1);
            CHECK_FALSE(rp.separation.has_value());
        }
    }

    const BranchSet two_points = track_branches(constant_table(
        Eigen::Vector2cd(0.0, 1.0).asDiagonal().toDenseMatrix(), 8));
    const RegionSet rt = detect_regions(spectrum_locus(two_points), 0.1);
    REQUIRE(rt.cluster_count() == 2);
    CHECK(*rt.separation == doctest::Approx(1.0));
    CHECK(rt.cluster_of(0) != rt.cluster_of(1));
}

TEST_CASE("track_branches: too-coarse grids are rejected with a hint") {
    const FrequencyTable table = symbol(fix::example_kernel(), FrequencyGrid(8));
    try {
        track_branches(table);
        FAIL("expected a tracking failure at grid size 8");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("doubling the grid") != std::string::npos);
    }
}
