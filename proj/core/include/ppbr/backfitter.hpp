#pragma once

#include <armadillo>
#include <memory>
#include <vector>

#include "ppbr/config.hpp"
#include "ppbr/rng.hpp"
#include "ppbr/types.hpp"

namespace ppbr {

// y_i - mu - sum_{l != k} g_l(<M_i, gamma_l gamma_l'>), the working response
// seen by component k. Uncached reference version; the Sampler keeps its own
// index/fit caches for the hot loop.
arma::vec partial_residuals(const Dataset& data, const ModelState& state, arma::uword k);

// Sets the offset so the centered ridge sums to zero over the data indices:
// the intercept owns the level, each g_k only its shape.
void center_ridge(ComponentState& comp, const Dataset& data);
void center_ridge(ComponentState& comp, const arma::vec& indices);

// sigma^2 | ... ~ IG(alpha + n/2, beta + 0.5 sum_i (y_i - mu - sum_k g_k)^2).
// mu here is the *previous* iteration's intercept -- the update order of the
// outer loop is mu-last, exactly as the algorithm prints it.
double update_sigma2(Rng& rng, const Dataset& data, const ModelState& state,
                     const FitConfig& cfg);

// mu | ... ~ N(m, v), v = (1/b^2 + n/sigma^2)^{-1},
// m = v (a/b^2 + sum_i e_i / sigma^2), e_i = y_i - sum_k g_k.
double update_mu(Rng& rng, const Dataset& data, const ModelState& state, const FitConfig& cfg);

// Windowed proposal-concentration tuning: a low acceptance rate means the
// proposals are too bold, so lambda grows (tighter vMF); a high rate shrinks
// it. Fires only when the window is full, then clears it.
void adapt_lambda(ComponentState& comp, const FitConfig& cfg);

// Deterministic starting state. mu0/sigma0^2 are response moments, ridges
// start flat, and each direction comes from ridge-regressing the running
// residuals on the vectorized upper triangles: the coefficient vector is
// reassembled into a symmetric matrix (off-diagonals halved), its leading
// eigenvector (largest |eigenvalue|) is the initial direction, and a linear
// fit in that index is peeled off before the next component.
ModelState initialize(const Dataset& data, const FitConfig& cfg);

struct Chain {
  FitConfig config;
  std::vector<ModelState> draws;  // post-warm-up snapshots
  arma::mat loglik;               // n x draws per-observation log densities
  arma::vec accept_rate;          // per component, over the whole run
};

// Backfitting Gibbs runner. Copying a Sampler snapshots state and RNG (the
// dataset is shared read-only), and a Sampler rebuilt from a saved ModelState
// with the same RNG continues the chain bit-for-bit: the index/fit caches are
// pure functions of the state, never accumulated across iterations.
//
// A start state with no components runs the conjugate-only subchain (just the
// intercept and noise variance); it exists for calibration testing.
class Sampler {
 public:
  Sampler(std::shared_ptr<const Dataset> data, FitConfig cfg, Rng rng);
  Sampler(std::shared_ptr<const Dataset> data, FitConfig cfg, Rng rng, ModelState start);

  void step();  // one full iteration: K sweeps + sigma^2 + mu + adaptation
  Chain run();  // cfg.iterations steps from here, keeping the final iterations - warmup

  const ModelState& state() const { return state_; }
  const Rng& rng() const { return rng_; }
  arma::uword iteration() const { return iter_; }

 private:
  void refresh_cache();
  void record(Chain& chain, arma::uword col) const;

  std::shared_ptr<const Dataset> data_;
  FitConfig cfg_;
  Rng rng_;
  ModelState state_;
  arma::mat idx_;  // n x K indices at the current directions
  arma::mat fit_;  // n x K centered ridge values
  arma::uword iter_ = 0;
  arma::vec accepts_;
  arma::vec sweeps_;
};

Chain run_chain(const Dataset& data, const FitConfig& cfg, Rng rng);

// Posterior predictive evaluation on new predictors.
arma::mat predict_draws(const Chain& chain, const std::vector<SymMatrix>& m);  // n x draws
arma::vec predict_mean(const Chain& chain, const std::vector<SymMatrix>& m);

}  // namespace ppbr
