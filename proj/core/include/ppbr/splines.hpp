#pragma once

#include <armadillo>

#include "ppbr/types.hpp"

namespace ppbr {

// J-2 interior knots at evenly spaced type-7 quantiles k/(J-1) of u, boundary
// knots at min/max. Ties are nudged apart by 1e-9*(hi-lo) so the sequence is
// strictly increasing. Throws degenerate_indices_error when the indices span
// (numerically) a single point.
KnotSet make_knots(const arma::vec& u, arma::uword basis_size);

// Natural cubic spline basis in truncated-power natural form over the full
// knot sequence x_1 = lo < interior... < x_K = hi (K = J):
//   N_1 = 1,  N_2 = u,  N_{k+2} = d_k - d_{K-1},
//   d_k(u) = [ (u - x_k)_+^3 - (u - x_K)_+^3 ] / (x_K - x_k).
// Each N is C^2 inside and exactly linear beyond the boundary knots, so
// evaluating the same expressions out of range *is* the linear extrapolation.
// J = 2 has no cubic terms and spans exactly the affine functions.
arma::vec eval_basis(double u, const KnotSet& knots);
arma::mat basis_matrix(const arma::vec& u, const KnotSet& knots);

// Conjugate pieces of the coefficient prior/posterior given residuals r:
//   sigma_rho = (B'B + rho I)^{-1},  c0 = sigma_rho B'r,  sigma0 = (B'B)^{-1}.
// When the Gram matrix is numerically singular (eigenvalue ratio < 1e-12) a
// jitter of 1e-10 * trace/J is added before inverting; marginal_score applies
// the identical rule so the two stay coherent.
struct PosteriorCoeffs {
  arma::vec c0;
  arma::mat sigma_rho;
  arma::mat sigma0;
};
PosteriorCoeffs posterior_coeffs(const arma::mat& b, const arma::vec& r, double rho);

// Collapsed log marginal of the residuals, with coefficients and noise
// variance integrated out under their conjugate priors; additive constants
// independent of the direction are dropped:
//   score = -(alpha + n/2) * log(S + 2 beta)
//   S = r'r - r'B (sigma_rho + sigma0/2 - sigma_rho sigma0^{-1} sigma_rho/2) B'r
// At rho = 0 the bracket collapses and S is exactly the least-squares RSS.
double marginal_score(const arma::mat& b, const arma::vec& r, double rho,
                      double alpha, double beta);

// Ridge function value: spline in the index minus the centering offset.
double eval_ridge(const RidgeFunction& g, double u);
arma::vec eval_ridge(const RidgeFunction& g, const arma::vec& u);

}  // namespace ppbr
