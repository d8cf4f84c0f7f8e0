#pragma once

#include <armadillo>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppbr {

// Thrown when a set of projection indices collapses to (numerically) a single
// point, so no knot sequence or basis can be built on them. The sampler
// catches this and scores the offending direction as log-density -inf.
struct degenerate_indices_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Symmetric p x p predictor stored as the packed upper triangle, row-major:
// (1,1),(1,2),...,(1,p),(2,2),...,(p,p). Only p(p+1)/2 doubles are kept; the
// dense image is materialized on demand.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(arma::uword p) : p_(p), upper_(p * (p + 1) / 2, arma::fill::zeros) {}

  // Validates symmetry of the dense input: |M(j,k) - M(k,j)| must not exceed
  // tol * max(1, max|entry|).
  static SymMatrix from_dense(const arma::mat& m, double tol = 1e-10);
  static SymMatrix from_packed(arma::uword p, arma::vec packed);

  arma::uword dim() const { return p_; }
  arma::uword packed_size() const { return upper_.n_elem; }

  double operator()(arma::uword j, arma::uword k) const {
    return upper_(tri_index(j, k));
  }
  double& packed_at(arma::uword j, arma::uword k) { return upper_(tri_index(j, k)); }

  const arma::vec& packed() const { return upper_; }
  arma::mat dense() const;

  // g' M g without forming the dense matrix; off-diagonals count twice.
  double quad_form(const arma::vec& g) const;

 private:
  arma::uword tri_index(arma::uword j, arma::uword k) const {
    if (j > k) std::swap(j, k);
    return j * p_ - j * (j - 1) / 2 + (k - j);
  }

  arma::uword p_ = 0;
  arma::vec upper_;
};

// Unit projection direction kept in both coordinate systems. gamma and -gamma
// induce the same index <M, gamma gamma'>, so every direction is stored with
// its last Cartesian coordinate nonnegative; the spherical angles theta
// (length p-1, each in [-pi/2, pi/2]) parameterize exactly that hemisphere.
class Direction {
 public:
  Direction() = default;

  static Direction from_gamma(const arma::vec& gamma);  // |norm-1| <= 1e-8 required
  static Direction from_theta(const arma::vec& theta);

  // Reassembles a previously serialized direction, keeping both coordinate
  // vectors bit-exactly as given (no renormalization, which could drift by an
  // ulp and break reproducibility of reloaded chains). Validates consistency
  // loosely and rejects clearly corrupted input.
  static Direction from_parts(arma::vec gamma, arma::vec theta);

  const arma::vec& gamma() const { return gamma_; }
  const arma::vec& theta() const { return theta_; }
  arma::uword p() const { return gamma_.n_elem; }

 private:
  arma::vec gamma_;
  arma::vec theta_;
};

struct Dataset {
  std::vector<SymMatrix> m;
  arma::vec y;

  arma::uword n() const { return y.n_elem; }
  arma::uword p() const { return m.empty() ? 0 : m.front().dim(); }
  void validate() const;  // throws std::invalid_argument on shape/finiteness problems
};

// <M, gamma gamma'> = gamma' M gamma, the scalar each ridge function sees.
double frobenius_index(const SymMatrix& m, const arma::vec& gamma);
double frobenius_index(const SymMatrix& m, const Direction& d);
arma::vec frobenius_index(const Dataset& data, const arma::vec& gamma);

// Rank conditions behind identifiability of the additive multi-index model:
// the direction matrix Gamma and its elementwise square must both have full
// column rank. Reported, never thrown — degenerate truths are legal inputs.
struct IdentifiabilityReport {
  bool rank_ok = false;
  bool hadamard_rank_ok = false;
  double min_pairwise_angle = 0.0;  // radians within [0, pi/2]; pi/2 when K < 2
};
IdentifiabilityReport check_identifiability(const std::vector<Direction>& dirs,
                                            double rel_tol = 1e-8);

// Knot sequence for one ridge function: boundary knots at the data range plus
// J-2 interior knots. J counts the full natural basis including the affine
// part, so J = 2 means a plain linear fit in the index.
struct KnotSet {
  arma::vec interior;
  double lo = 0.0;
  double hi = 1.0;
  arma::uword basis_size() const { return interior.n_elem + 2; }
};

// One additive component's ridge function: natural cubic spline coefficients
// over a knot set, minus a centering offset chosen so the function averages to
// zero over the training indices (the intercept mu absorbs the level).
struct RidgeFunction {
  arma::vec coeffs;
  KnotSet knots;
  double center_offset = 0.0;
};

// Full per-component sampler state.
struct ComponentState {
  Direction direction;
  RidgeFunction ridge;
  std::vector<int> m;   // length p-1; 1 = spike on that angle, 0 = slab
  double w = 0.5;       // spike weight, refreshed by its Beta full conditional
  double lambda = 1e4;  // vMF proposal concentration (adapted during the run)
  std::vector<char> accept_window;  // accept flags since the last adaptation
};

struct ModelState {
  double mu = 0.0;
  double sigma2 = 1.0;
  std::vector<ComponentState> comps;
};

}  // namespace ppbr
