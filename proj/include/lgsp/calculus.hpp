#pragma once

#include "lgsp/kernel.hpp"
#include "lgsp/spectral.hpp"
#include "lgsp/transform.hpp"

#include <string>
#include <variant>
#include <vector>

namespace lgsp {

/// Region selector for a scalar-function piece: either a cluster tag from
/// a RegionSet or an explicit disc in the spectral plane.
struct ClusterRef {
    int index = 0;
};
struct Disc {
    Complex center;
    double radius = 0.0;
};
using RegionSelector = std::variant<ClusterRef, Disc>;

/// One scalar function piece, valid on its region. Holomorphic families
/// carry a closed-form derivative; the gaussian family does not and is
/// usable only on branches whose nilpotents vanish.
///
/// Families and parameter layouts:
///   "poly"       coefficients a_0..a_d, ascending degree (real)
///   "exp_affine" [alpha_re, alpha_im, beta_re, beta_im] -> exp(alpha*z + beta)
///   "sqrt_shift" [gamma_re, gamma_im] -> principal sqrt(z - gamma)
///   "gaussian"   [mu_re, mu_im, sigma] -> exp(-|z-mu|^2/sigma^2) / (2*pi*sigma)
struct PhiPiece {
    RegionSelector region;
    std::string family;
    std::vector<double> params;
    bool holomorphic = true;

    Complex value(Complex z) const;
    Complex derivative(Complex z) const;
};

/// Piecewise scalar function on the spectrum; zero outside all regions.
/// Pieces must claim disjoint sets of branches.
struct PhiSpec {
    std::vector<PhiPiece> pieces;
};

PhiPiece phi_poly(std::vector<double> coeffs, RegionSelector region);
PhiPiece phi_exp_affine(Complex alpha, Complex beta, RegionSelector region);
PhiPiece phi_sqrt_shift(Complex gamma, RegionSelector region);

/// Circular complex Gaussian bump centered at mu: non-holomorphic, so the
/// resulting spec works only through the spectral path.
PhiSpec gaussian_phi(Complex mu, double sigma, RegionSelector region);

/// Checks family names, parameter counts, and parameter ranges.
void validate_phi(const PhiSpec& phi);

/// Smallest disc centered at the locus centroid containing every locus
/// point, padded by margin; a convenient whole-spectrum region.
Disc enclosing_disc(const SpectrumLocus& locus, double margin);

/// Per-branch multiplier sequences a_k(omega_j) over the grid.
struct SpectralMultipliers {
    std::vector<std::vector<Complex>> values; // [branch][frequency index]

    int branch_count() const { return static_cast<int>(values.size()); }
    static SpectralMultipliers constant(int branches, int grid_size, Complex value);
};

/// Maps each branch to the index of the piece that owns it (-1 for the
/// default-zero complement). A ClusterRef selector resolves through the
/// RegionSet computed from this same branch set; a Disc owns a branch only
/// when the branch's entire locus lies inside it (membership is decided
/// per branch, never per frequency, so region boundaries cannot jitter).
std::vector<int> resolve_pieces(const PhiSpec& phi, const BranchSet& bs, const RegionSet* regions);

/// A(omega_j) = sum_k a_k(omega_j) P_k(omega_j) + N_k(omega_j); the
/// nilpotent enters unscaled.
FrequencyTable multiplier_table(const BranchSet& bs, const SpectralMultipliers& a);

/// A(omega_j) = sum_k phi(lambda_k) P_k + phi'(lambda_k) N_k.
FrequencyTable phi_table_spectral(const BranchSet& bs, const PhiSpec& phi,
                                  const RegionSet* regions = nullptr);

/// A(omega_j) by trapezoidal quadrature of phi against the resolvent on a
/// circle per piece enclosing exactly the eigenvalues the piece claims
/// (claims are geometric here: distance <= radius to a cluster's locus,
/// or containment in a disc). Requires every piece holomorphic.
FrequencyTable phi_table_contour(const FrequencyTable& table, const PhiSpec& phi, int q,
                                 const RegionSet* regions = nullptr);

Signal apply_multipliers(const BranchSet& bs, const SpectralMultipliers& a, const Signal& x,
                         const Window& out);
Signal apply_phi_spectral(const BranchSet& bs, const PhiSpec& phi, const Signal& x,
                          const Window& out, const RegionSet* regions = nullptr);
Signal apply_phi_contour(const FrequencyTable& table, const PhiSpec& phi, int q, const Signal& x,
                         const Window& out, const RegionSet* regions = nullptr);

/// Distributional bandpass limit at a grid frequency omega*:
/// output[t] = e^{-2*pi*i*omega*t} * P_branch(omega*) * xhat(omega*).
Signal bandpass_reference(const BranchSet& bs, int branch, double omega_star, const Signal& x,
                          const Window& out);

/// Max over the grid of the spectral norm of A(omega)S(omega) - S(omega)A(omega).
double verify_covariance(const FrequencyTable& a, const FrequencyTable& s);

} // namespace lgsp
