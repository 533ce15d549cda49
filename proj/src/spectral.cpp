#include "lgsp/spectral.hpp"

#include "lgsp/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace lgsp {

namespace {

constexpr double kEigenvectorCondLimit = 1e6;
constexpr double kNilpotentZeroFactor = 1e-8;
constexpr double kDefaultTolFactor = 1e-9;
constexpr int kProjectionQuadratureNodes = 128;

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::vector<int>> groups_of(UnionFind& uf, int n) {
    std::vector<std::vector<int>> by_root(n);
    for (int i = 0; i < n; ++i) by_root[static_cast<size_t>(uf.find(i))].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& g : by_root)
        if (!g.empty()) out.push_back(std::move(g));
    return out;
}

double min_pairwise_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : a)
        for (const auto& y : b) best = std::min(best, std::abs(x - y));
    return best;
}

Complex mean_of(const VectorXcd& eigs, const std::vector<int>& members) {
    Complex c = 0.0;
    for (int i : members) c += eigs(i);
    return c / static_cast<double>(members.size());
}

/// Cluster eigenvalue indices: single-linkage at tol, then a
/// conservative second pass that merges clusters closer than 2*tol.
std::vector<std::vector<int>> cluster_eigenvalues(const VectorXcd& eigs, double tol,
                                                  bool& merge_warning) {
    const int n = static_cast<int>(eigs.size());
    UnionFind uf(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(eigs(i) - eigs(j)) <= tol) uf.unite(i, j);
    auto clusters = groups_of(uf, n);

    merge_warning = false;
    bool merged = true;
    while (merged && clusters.size() > 1) {
        merged = false;
        for (size_t a = 0; a < clusters.size() && !merged; ++a)
            for (size_t b = a + 1; b < clusters.size() && !merged; ++b) {
                double d = std::numeric_limits<double>::infinity();
                for (int i : clusters[a])
                    for (int j : clusters[b]) d = std::min(d, std::abs(eigs(i) - eigs(j)));
                if (d <= 2.0 * tol) {
                    clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
                    clusters.erase(clusters.begin() + static_cast<long>(b));
                    merge_warning = true;
                    merged = true;
                }
            }
    }
    for (auto& c : clusters) std::sort(c.begin(), c.end());
    return clusters;
}

bool cluster_order(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

MatrixXcd matrix_power(const MatrixXcd& m, int p) {
    MatrixXcd r = MatrixXcd::Identity(m.rows(), m.cols());
    for (int i = 0; i < p; ++i) r = r * m;
    return r;
}

/// Minimum-cost assignment. Exhaustive permutation search for small
/// sizes (exact, deterministic ties), Hungarian potentials beyond.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    if (n <= 8) {
        std::vector<int> perm(static_cast<size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<int> best = perm;
        double best_cost = std::numeric_limits<double>::infinity();
        do {
            double c = 0.0;
            for (int i = 0; i < n; ++i) c += cost(i, perm[static_cast<size_t>(i)]);
            if (c < best_cost) {
                best_cost = c;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<size_t>(n) + 1, 0.0), v(static_cast<size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<size_t>(n) + 1, 0), way(static_cast<size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<size_t>(n) + 1, 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            int i0 = p[static_cast<size_t>(j0)], j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j)
                if (!used[static_cast<size_t>(j)]) {
                    double cur = cost(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                    if (cur < minv[static_cast<size_t>(j)]) {
                        minv[static_cast<size_t>(j)] = cur;
                        way[static_cast<size_t>(j)] = j0;
                    }
                    if (minv[static_cast<size_t>(j)] < delta) {
                        delta = minv[static_cast<size_t>(j)];
                        j1 = j;
                    }
                }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<size_t>(j0)];
            p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> result(static_cast<size_t>(n), 0);
    for (int j = 1; j <= n; ++j)
        if (p[static_cast<size_t>(j)] > 0) result[static_cast<size_t>(p[static_cast<size_t>(j)]) - 1] = j - 1;
    return result;
}

} // namespace

double PointDecomposition::max_condition_violation(const MatrixXcd& s) const {
    const int n = node_count();
    MatrixXcd psum = MatrixXcd::Zero(n, n);
    MatrixXcd recon = MatrixXcd::Zero(n, n);
    double worst = 0.0;
    for (int k = 0; k < count(); ++k) {
        psum += projections[static_cast<size_t>(k)];
        recon += eigenvalues[static_cast<size_t>(k)] * projections[static_cast<size_t>(k)] +
                 nilpotents[static_cast<size_t>(k)];
        const auto& pk = projections[static_cast<size_t>(k)];
        const auto& nk = nilpotents[static_cast<size_t>(k)];
        worst = std::max(worst, spectral_norm(nk - pk * nk * pk));
        worst = std::max(worst, spectral_norm(matrix_power(nk, n)));
        for (int j = 0; j < count(); ++j) {
            const auto& pj = projections[static_cast<size_t>(j)];
            MatrixXcd prod = pk * pj;
            if (j == k) prod -= pk;
            worst = std::max(worst, spectral_norm(prod));
        }
    }
    worst = std::max(worst, spectral_norm(psum - MatrixXcd::Identity(n, n)));
    worst = std::max(worst, spectral_norm(recon - s));
    return worst;
}

MatrixXcd group_projection(const MatrixXcd& s, Complex center, double radius, int q) {
    if (s.rows() != s.cols()) throw ValidationError("group_projection: matrix must be square");
    if (radius <= 0.0) throw ValidationError("group_projection: radius must be positive");
    if (q < 4) throw ValidationError("group_projection: need at least 4 quadrature nodes");

    const int n = static_cast<int>(s.rows());
    Eigen::ComplexEigenSolver<MatrixXcd> es(s, false);
    if (es.info() != Eigen::Success) throw NumericalError("group_projection: eigenvalue solve failed");
    int enclosed = 0;
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(es.eigenvalues()(i) - center);
        if (std::abs(d - radius) < 1e-6 * radius)
            throw NumericalError("group_projection: eigenvalue within 1e-6*radius of the contour");
        if (d < radius) ++enclosed;
    }
    if (enclosed == 0) throw NumericalError("group_projection: contour encloses no eigenvalue");

    const MatrixXcd id = MatrixXcd::Identity(n, n);
    MatrixXcd acc = MatrixXcd::Zero(n, n);
    for (int j = 0; j < q; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / q;
        const Complex dir{std::cos(theta), std::sin(theta)};
        const Complex z = center + radius * dir;
        acc += (radius * dir) * (z * id - s).partialPivLu().solve(id);
    }
    return acc / static_cast<double>(q);
}

PointDecomposition decompose_point(const MatrixXcd& s) {
    return decompose_point(s, kDefaultTolFactor * spectral_norm(s));
}

PointDecomposition decompose_point(const MatrixXcd& s, double tol) {
    if (s.rows() != s.cols()) throw ValidationError("decompose_point: matrix must be square");
    const int n = static_cast<int>(s.rows());
    const double scale = spectral_norm(s);
    if (scale == 0.0) {
        // zero matrix: single eigenvalue 0 with the full space as its subspace
        return {{Complex{0.0}}, {MatrixXcd::Identity(n, n)}, {MatrixXcd::Zero(n, n)}, {n}, false};
    }
    if (tol <= 0.0) throw ValidationError("decompose_point: tol must be positive");

    Eigen::ComplexEigenSolver<MatrixXcd> es(s, true);
    if (es.info() != Eigen::Success) throw NumericalError("decompose_point: eigenvalue solve failed");
    const VectorXcd eigs = es.eigenvalues();

    bool merge_warning = false;
    auto clusters = cluster_eigenvalues(eigs, tol, merge_warning);
    std::sort(clusters.begin(), clusters.end(),
              [&](const std::vector<int>& a, const std::vector<int>& b) {
                  return cluster_order(mean_of(eigs, a), mean_of(eigs, b));
              });
    const int count = static_cast<int>(clusters.size());

    std::vector<MatrixXcd> projections;
    bool have_projections = false;
    if (count == 1) {
        projections = {MatrixXcd::Identity(n, n)};
        have_projections = true;
    } else {
        // fast path: projectors from the eigenvector basis
        const MatrixXcd& vecs = es.eigenvectors();
        Eigen::JacobiSVD<MatrixXcd> svd(vecs);
        const double smin = svd.singularValues()(n - 1);
        if (smin > 0.0 && svd.singularValues()(0) / smin < kEigenvectorCondLimit) {
            const MatrixXcd vinv = vecs.partialPivLu().solve(MatrixXcd::Identity(n, n));
            MatrixXcd psum = MatrixXcd::Zero(n, n);
            for (const auto& members : clusters) {
                MatrixXcd p = MatrixXcd::Zero(n, n);
                for (int i : members) p += vecs.col(i) * vinv.row(i);
                projections.push_back(std::move(p));
                psum += projections.back();
            }
            have_projections =
                spectral_norm(psum - MatrixXcd::Identity(n, n)) < 1e-10 * std::max(1.0, scale);
            if (!have_projections) projections.clear();
        }
    }
    if (!have_projections) {
        // robust path: resolvent contour around each cluster
        for (const auto& members : clusters) {
            const Complex c = mean_of(eigs, members);
            double r_in = 0.0;
            for (int i : members) r_in = std::max(r_in, std::abs(eigs(i) - c));
            double d_out = std::numeric_limits<double>::infinity();
            for (int i = 0; i < n; ++i)
                if (std::find(members.begin(), members.end(), i) == members.end())
                    d_out = std::min(d_out, std::abs(eigs(i) - c));
            double radius = std::isfinite(d_out) ? 0.5 * (r_in + d_out) : r_in + std::max(1.0, scale);
            if (radius <= r_in) radius = r_in + tol;
            projections.push_back(group_projection(s, c, radius, kProjectionQuadratureNodes));
        }
    }

    PointDecomposition dec;
    dec.merge_warning = merge_warning;
    for (int k = 0; k < count; ++k) {
        const Complex lam = mean_of(eigs, clusters[static_cast<size_t>(k)]);
        MatrixXcd nil = (s - lam * MatrixXcd::Identity(n, n)) * projections[static_cast<size_t>(k)];
        if (spectral_norm(nil) < kNilpotentZeroFactor * scale) nil.setZero();
        dec.eigenvalues.push_back(lam);
        dec.projections.push_back(projections[static_cast<size_t>(k)]);
        dec.nilpotents.push_back(std::move(nil));
        dec.multiplicities.push_back(static_cast<int>(clusters[static_cast<size_t>(k)].size()));
    }
    return dec;
}

bool BranchSet::monodromy_is_identity() const {
    for (int k = 0; k < branch_count(); ++k)
        if (monodromy[static_cast<size_t>(k)] != k) return false;
    return true;
}

bool BranchSet::branch_has_nilpotent(int k) const {
    for (const auto& m : nilpotent[static_cast<size_t>(k)])
        if (m.norm() != 0.0) return true;
    return false;
}

MatrixXcd BranchSet::reconstruct(int j) const {
    MatrixXcd acc = MatrixXcd::Zero(n, n);
    for (int k = 0; k < branch_count(); ++k)
        acc += lambda[static_cast<size_t>(k)][static_cast<size_t>(j)] *
                   projection[static_cast<size_t>(k)][static_cast<size_t>(j)] +
               nilpotent[static_cast<size_t>(k)][static_cast<size_t>(j)];
    return acc;
}

BranchSet track_branches(const FrequencyTable& table, double tol) {
    const int m = table.grid.size;
    std::vector<PointDecomposition> decs;
    decs.reserve(static_cast<size_t>(m));
    for (const auto& v : table.values)
        decs.push_back(tol > 0.0 ? decompose_point(v, tol) : decompose_point(v));

    const int count = decs.front().count();
    for (int j = 1; j < m; ++j)
        if (decs[static_cast<size_t>(j)].count() != count)
            throw NumericalError("track_branches: branch count varies across the grid (" +
                                 std::to_string(count) + " vs " +
                                 std::to_string(decs[static_cast<size_t>(j)].count()) +
                                 "); try doubling the grid size");

    BranchSet bs;
    bs.grid = table.grid;
    bs.n = table.node_count();
    bs.lambda.assign(static_cast<size_t>(count), {});
    bs.projection.assign(static_cast<size_t>(count), {});
    bs.nilpotent.assign(static_cast<size_t>(count), {});
    for (int k = 0; k < count; ++k) {
        bs.lambda[static_cast<size_t>(k)].reserve(static_cast<size_t>(m));
        bs.projection[static_cast<size_t>(k)].reserve(static_cast<size_t>(m));
        bs.nilpotent[static_cast<size_t>(k)].reserve(static_cast<size_t>(m));
    }

    // assignment cost between consecutive slices: eigenvalue distance,
    // projection overlap |tr(P_a P_b)| as a tiny tie-break
    auto assign_step = [&](int k_from_slice, const PointDecomposition& to) {
        Eigen::MatrixXd dist(count, count), overlap(count, count);
        for (int a = 0; a < count; ++a)
            for (int b = 0; b < count; ++b) {
                dist(a, b) = std::abs(bs.lambda[static_cast<size_t>(a)][static_cast<size_t>(k_from_slice)] -
                                      to.eigenvalues[static_cast<size_t>(b)]);
                overlap(a, b) = std::abs(
                    (bs.projection[static_cast<size_t>(a)][static_cast<size_t>(k_from_slice)] *
                     to.projections[static_cast<size_t>(b)])
                        .trace());
            }
        const double w = 1e-9 * (1.0 + dist.maxCoeff()) / (1.0 + static_cast<double>(bs.n));
        Eigen::MatrixXd combined = dist - w * overlap;
        return min_cost_assignment(combined);
    };

    for (int k = 0; k < count; ++k) {
        bs.lambda[static_cast<size_t>(k)].push_back(decs[0].eigenvalues[static_cast<size_t>(k)]);
        bs.projection[static_cast<size_t>(k)].push_back(decs[0].projections[static_cast<size_t>(k)]);
        bs.nilpotent[static_cast<size_t>(k)].push_back(decs[0].nilpotents[static_cast<size_t>(k)]);
    }
    for (int j = 1; j < m; ++j) {
        const auto sigma = assign_step(j - 1, decs[static_cast<size_t>(j)]);
        for (int k = 0; k < count; ++k) {
            const auto c = static_cast<size_t>(sigma[static_cast<size_t>(k)]);
            bs.lambda[static_cast<size_t>(k)].push_back(decs[static_cast<size_t>(j)].eigenvalues[c]);
            bs.projection[static_cast<size_t>(k)].push_back(decs[static_cast<size_t>(j)].projections[c]);
            bs.nilpotent[static_cast<size_t>(k)].push_back(decs[static_cast<size_t>(j)].nilpotents[c]);
        }
    }
    bs.monodromy = assign_step(m - 1, decs[0]);

    double gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j)
        for (int a = 0; a < count; ++a)
            for (int b = a + 1; b < count; ++b)
                gap = std::min(gap, std::abs(bs.lambda[static_cast<size_t>(a)][static_cast<size_t>(j)] -
                                             bs.lambda[static_cast<size_t>(b)][static_cast<size_t>(j)]));
    double jump = 0.0;
    for (int k = 0; k < count; ++k) {
        for (int j = 0; j + 1 < m; ++j)
            jump = std::max(jump, std::abs(bs.lambda[static_cast<size_t>(k)][static_cast<size_t>(j + 1)] -
                                           bs.lambda[static_cast<size_t>(k)][static_cast<size_t>(j)]));
        jump = std::max(jump,
                        std::abs(bs.lambda[static_cast<size_t>(bs.monodromy[static_cast<size_t>(k)])][0] -
                                 bs.lambda[static_cast<size_t>(k)][static_cast<size_t>(m - 1)]));
    }
    bs.min_same_frequency_gap = gap;
    bs.max_adjacent_jump = jump;
    for (const auto& d : decs) bs.merge_warning = bs.merge_warning || d.merge_warning;

    if (count > 1 && jump >= 0.5 * gap)
        throw NumericalError("track_branches: adjacent eigenvalue motion " + std::to_string(jump) +
                             " reaches half the smallest same-frequency gap " + std::to_string(gap) +
                             "; try doubling the grid size");
    return bs;
}

SpectrumLocus spectrum_locus(const BranchSet& bs) {
    SpectrumLocus locus;
    locus.branch_count = bs.branch_count();
    for (int k = 0; k < bs.branch_count(); ++k)
        for (int j = 0; j < bs.grid.size; ++j)
            locus.points.push_back(
                {bs.grid.omega(j), k, bs.lambda[static_cast<size_t>(k)][static_cast<size_t>(j)]});
    return locus;
}

int RegionSet::cluster_of(int branch) const {
    for (int c = 0; c < cluster_count(); ++c)
        for (int b : clusters[static_cast<size_t>(c)])
            if (b == branch) return c;
    return -1;
}

RegionSet detect_regions(const SpectrumLocus& locus, double delta) {
    if (delta <= 0.0) throw ValidationError("detect_regions: delta must be positive");
    const int nb = locus.branch_count;
    std::vector<std::vector<Complex>> by_branch(static_cast<size_t>(nb));
    for (const auto& p : locus.points) by_branch[static_cast<size_t>(p.branch)].push_back(p.value);

    // Branches join one cluster when their sampled loci meet at the scale
    // delta/2: intersecting curves always do, while curves that merely
    // pass near each other keep their own regions as long as some
    // positive tube radius separates them.
    Eigen::MatrixXd dist(nb, nb);
    UnionFind uf(nb);
    for (int a = 0; a < nb; ++a)
        for (int b = a + 1; b < nb; ++b) {
            dist(a, b) = min_pairwise_distance(by_branch[static_cast<size_t>(a)],
                                               by_branch[static_cast<size_t>(b)]);
            if (dist(a, b) <= 0.5 * delta) uf.unite(a, b);
        }

    RegionSet rs;
    rs.radius = delta;
    rs.clusters = groups_of(uf, nb);
    std::sort(rs.clusters.begin(), rs.clusters.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a.front() < b.front(); });

    if (rs.cluster_count() > 1) {
        double sep = std::numeric_limits<double>::infinity();
        for (size_t a = 0; a < rs.clusters.size(); ++a)
            for (size_t b = a + 1; b < rs.clusters.size(); ++b)
                for (int i : rs.clusters[a])
                    for (int j : rs.clusters[b]) sep = std::min(sep, dist(std::min(i, j), std::max(i, j)));
        rs.separation = sep;
        // cap the tube radius so distinct regions stay disjoint
        rs.radius = std::min(rs.radius, 0.45 * sep);
    }
    for (const auto& members : rs.clusters) {
        std::vector<Complex> pts;
        for (int b : members)
            pts.insert(pts.end(), by_branch[static_cast<size_t>(b)].begin(),
                       by_branch[static_cast<size_t>(b)].end());
        rs.cluster_locus.push_back(std::move(pts));
    }
    return rs;
}

} // namespace lgsp
