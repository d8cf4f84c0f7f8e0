#pragma once

#include <armadillo>
#include <utility>
#include <vector>

#include "ppbr/backfitter.hpp"
#include "ppbr/types.hpp"

namespace ppbr {

// Mean squared prediction error over paired vectors.
double mspe(const arma::vec& predictions, const arma::vec& truths);

// Absolute cosine similarity |u'v| after defensive normalization; the natural
// distance between projection directions, which are only defined up to sign.
double acs(const arma::vec& u, const arma::vec& v);

// Matching between a chain's component labels and a set of reference
// directions. The permutation is chain-level -- label switching within a
// converged run is rare, so whole runs are matched -- while the sign flips
// are per draw.
struct AlignmentMap {
  arma::uvec permutation;  // slot k of the reference order -> sampled component
  arma::imat sign_flips;   // draws x K, +1 keep / -1 negate the drawn gamma
};

// Greedy matching: slot k (in reference order) takes the unused sampled
// component with the largest total ACS against reference k over all draws.
// A draw's sign is flipped when its gamma disagrees with the reference at the
// reference's largest-magnitude coordinate.
AlignmentMap align(const Chain& chain, const std::vector<Direction>& reference);

// Reference-free ordering for real data: within each draw, components are
// sorted by increasing correlation between the fitted indices u_i and the
// ridge values g(u_i) over `data`, so decreasing ridges come first. Returns
// draws x K; row t lists sampled component indices in slot order.
arma::umat monotonicity_order(const Chain& chain, const Dataset& data);

// Expands a chain-level permutation to the draws x K layout shared with
// monotonicity_order.
arma::umat assignment_matrix(const AlignmentMap& map, arma::uword n_draws);

// Equal-tailed interval from empirical quantiles (linear interpolation
// between order statistics) at (1-level)/2 and 1-(1-level)/2.
std::pair<double, double> credible_interval(const arma::vec& samples, double level);

// Per-coordinate interval coverage of the reference directions.
struct CoverageEntry {
  arma::uword component = 0;   // slot in the reference order
  arma::uword coordinate = 0;
  double truth = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double cover = 0.0;  // 1 when truth lies inside [lo, hi]
  double length = 0.0;
};

// K*p entries, component-major, built from the aligned and sign-corrected
// draws of every gamma coordinate.
std::vector<CoverageEntry> coverage_report(const Chain& chain, const AlignmentMap& map,
                                           const std::vector<Direction>& reference,
                                           double level = 0.8);

// Per-draw ACS between each aligned sampled direction and its reference,
// draws x K; the raw samples behind direction-recovery density plots.
arma::mat acs_samples(const Chain& chain, const AlignmentMap& map,
                      const std::vector<Direction>& reference);

// Pointwise posterior summary of each component's ridge function on a common
// per-component grid.
struct RidgeSummary {
  arma::mat grid;    // n_points x K, equally spaced within each slot's range
  arma::mat median;  // n_points x K
  arma::mat lo;      // pointwise 10% quantile
  arma::mat hi;      // pointwise 90% quantile
};

// Index ranges [min, max] per reference direction over a dataset, K x 2.
arma::mat truth_index_ranges(const std::vector<Direction>& reference, const Dataset& data);

// Reference-free ranges: each draw contributes its own index range for the
// component assigned to the slot; the slot's range takes the median lower and
// median upper bound across draws. K x 2.
arma::mat posterior_index_ranges(const Chain& chain, const arma::umat& assignment,
                                 const Dataset& data);

RidgeSummary ridge_summary(const Chain& chain, const arma::umat& assignment,
                           const arma::mat& ranges, arma::uword n_points = 100);

// Watanabe-Akaike information criterion from an n x S matrix of per-draw,
// per-observation log densities:
//   -2 * sum_i [ log mean_t exp(l_it)  -  var_t(l_it) ]
// with the log-sum-exp computed stably and the (S-1)-denominator variance.
// Lower is better. Throws on non-finite entries.
double waic(const arma::mat& loglik);

}  // namespace ppbr
