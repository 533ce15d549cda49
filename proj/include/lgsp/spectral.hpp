#pragma once

#include "lgsp/transform.hpp"

#include <optional>

namespace lgsp {

/// Decomposition of one matrix S into sum_k lambda_k P_k + N_k with
/// idempotent, mutually orthogonal projections summing to the identity
/// and nilpotents confined to their invariant subspaces. Eigenvalues
/// closer than the clustering tolerance share one projection; lambda_k
/// is then the cluster mean.
struct PointDecomposition {
    std::vector<Complex> eigenvalues;
    std::vector<MatrixXcd> projections;
    std::vector<MatrixXcd> nilpotents;
    std::vector<int> multiplicities;
    /// Two clusters sat between tol and 2*tol apart and were merged
    /// conservatively.
    bool merge_warning = false;

    int count() const { return static_cast<int>(eigenvalues.size()); }
    int node_count() const { return static_cast<int>(projections.front().rows()); }

    /// Largest violation across the algebraic conditions: resolution of
    /// identity, mutual orthogonality, nilpotent confinement, nilpotency,
    /// and reconstruction of s.
    double max_condition_violation(const MatrixXcd& s) const;
};

/// Eigenvalue branches tracked across the whole grid, one slice of
/// (lambda, P, N) per grid point per branch. Branch identity follows
/// continuity; the permutation observed after one loop of the torus is
/// recorded, never repaired.
struct BranchSet {
    FrequencyGrid grid;
    int n = 0;
    /// branch k, grid point j
    std::vector<std::vector<Complex>> lambda;
    std::vector<std::vector<MatrixXcd>> projection;
    std::vector<std::vector<MatrixXcd>> nilpotent;
    std::vector<int> monodromy;
    /// Diagnostics from the tracking sweep.
    double max_adjacent_jump = 0.0;
    double min_same_frequency_gap = 0.0;
    bool merge_warning = false;

    int branch_count() const { return static_cast<int>(lambda.size()); }
    bool monodromy_is_identity() const;
    bool branch_has_nilpotent(int k) const;

    /// Reassembled symbol value sum_k lambda_k P_k + N_k at grid point j.
    MatrixXcd reconstruct(int j) const;
};

struct LocusPoint {
    double omega;
    int branch;
    Complex value;
};

/// The sampled spectrum: every eigenvalue of every grid point, tagged
/// by branch and frequency.
struct SpectrumLocus {
    std::vector<LocusPoint> points;
    int branch_count = 0;
};

/// Branches grouped into clusters whose tubes are pairwise disjoint.
/// Stores the per-cluster locus so contours and membership tests can
/// be built from it.
struct RegionSet {
    std::vector<std::vector<int>> clusters;  // branch ids, sorted
    /// Tube radius: the requested delta, capped below half the achieved
    /// separation so distinct regions never touch.
    double radius = 0.0;
    /// Smallest distance between points of different clusters; absent
    /// when there is a single cluster.
    std::optional<double> separation;
    std::vector<std::vector<Complex>> cluster_locus;

    int cluster_count() const { return static_cast<int>(clusters.size()); }
    int cluster_of(int branch) const;
};

/// Decompose one symbol value. Eigenvalues within tol of each other are
/// clustered; per-cluster projections come from eigenvectors when they
/// are well conditioned and from a resolvent contour integral otherwise.
PointDecomposition decompose_point(const MatrixXcd& s, double tol);

/// Same with tol = 1e-9 * ||s||.
PointDecomposition decompose_point(const MatrixXcd& s);

/// Spectral projection onto the invariant subspace enclosed by the
/// circle |z - center| = radius, by trapezoidal quadrature of the
/// resolvent integral on q nodes. The circle must enclose at least one
/// eigenvalue and pass no closer than 1e-6 * radius to any.
MatrixXcd group_projection(const MatrixXcd& s, Complex center, double radius, int q);

/// Decompose every grid point and join the slices into continuous
/// branches by optimal assignment between consecutive points. Fails
/// when the branch count varies over the grid or adjacent motion
/// exceeds half the smallest same-frequency gap; both suggest doubling
/// the grid size. tol <= 0 selects the per-point default.
BranchSet track_branches(const FrequencyTable& table, double tol = -1.0);

SpectrumLocus spectrum_locus(const BranchSet& bs);

/// Group branches whose sampled loci meet at the scale delta/2
/// (union-find over branch pairs) and report the achieved separation.
/// Intersecting branch curves always share a cluster; disjoint curves
/// keep separate clusters with the tube radius capped to fit.
RegionSet detect_regions(const SpectrumLocus& locus, double delta);

} // namespace lgsp
