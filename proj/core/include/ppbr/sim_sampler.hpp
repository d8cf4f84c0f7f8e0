#pragma once

#include <armadillo>
#include <vector>

#include "ppbr/config.hpp"
#include "ppbr/types.hpp"

namespace ppbr {

class Rng;

// Collapsed log posterior of a direction against one component's partial
// residuals: prior on the hemisphere plus the marginal score with spline
// coefficients and noise variance integrated out. Knots are rebuilt from this
// direction's own indices (proposal-local knots). Returns -inf when the
// indices degenerate. Optionally hands back the computed indices.
double log_posterior_gamma(const arma::vec& gamma, const std::vector<int>& m,
                           const arma::vec& residuals, const Dataset& data,
                           const FitConfig& cfg, arma::vec* indices_out = nullptr);

struct SweepOptions {
  bool update_m = true;
  bool update_w = true;
  // Cached <M_i, gamma gamma'> of the component's current direction; avoids
  // an O(n p^2) recompute when the backfitter already tracks them.
  const arma::vec* current_indices = nullptr;
};

struct SweepResult {
  bool accepted = false;
  double log_post = 0.0;  // score of the component's post-sweep direction
  arma::vec indices;      // indices at the post-sweep direction
};

// One full per-component update:
//   1. Gibbs refresh of the allocations m from the pre-proposal angles,
//   2. Gibbs refresh of the spike weight w,
//   3. vMF proposal around the current direction, folded onto the upper
//      hemisphere (the folded kernel stays symmetric), accepted by the plain
//      Metropolis ratio of collapsed posteriors,
//   4. spline coefficients reset to their conditional posterior center c0 at
//      the post-sweep direction against the current residuals -- on both
//      accept and reject, since the residuals moved.
// Centering of the refreshed ridge is the caller's job; the offset comes back
// zeroed. Steps 1-2 are skipped entirely under the Uniform prior.
SweepResult mh_sweep(Rng& rng, ComponentState& comp, const arma::vec& residuals,
                     const Dataset& data, const FitConfig& cfg,
                     const SweepOptions& opt = {});

}  // namespace ppbr
