#include "ppbr/sim_sampler.hpp"

#include <cmath>
#include <limits>

#include "ppbr/geometry.hpp"
#include "ppbr/rng.hpp"
#include "ppbr/splines.hpp"

namespace ppbr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Score plus the reusable pieces, so the accepted direction's basis does not
// have to be rebuilt for the coefficient refresh.
struct Scored {
  double lp = kNegInf;
  bool usable = false;  // knots/basis exist (indices not degenerate)
  KnotSet knots;
  arma::mat basis;
};

Scored score_direction(const arma::vec& theta, const std::vector<int>& m,
                       const arma::vec& indices, const arma::vec& residuals,
                       const FitConfig& cfg) {
  Scored s;
  try {
    s.knots = make_knots(indices, cfg.basis_size);
  } catch (const degenerate_indices_error&) {
    return s;  // collapsed indices carry no information about g
  }
  s.basis = basis_matrix(indices, s.knots);
  s.usable = true;
  s.lp = log_prior_gamma(theta, m, cfg.prior) +
         marginal_score(s.basis, residuals, cfg.rho, cfg.sig_alpha, cfg.sig_beta);
  return s;
}

}  // namespace

double log_posterior_gamma(const arma::vec& gamma, const std::vector<int>& m,
                           const arma::vec& residuals, const Dataset& data,
                           const FitConfig& cfg, arma::vec* indices_out) {
  cfg.validate();
  if (residuals.n_elem != data.n())
    throw std::invalid_argument("log_posterior_gamma: residual length mismatch");
  arma::vec u = frobenius_index(data, gamma);
  const Scored s = score_direction(to_spherical(gamma), m, u, residuals, cfg);
  if (indices_out) *indices_out = std::move(u);
  return s.lp;
}

SweepResult mh_sweep(Rng& rng, ComponentState& comp, const arma::vec& residuals,
                     const Dataset& data, const FitConfig& cfg, const SweepOptions& opt) {
  cfg.validate();
  if (residuals.n_elem != data.n())
    throw std::invalid_argument("mh_sweep: residual length mismatch");
  if (comp.direction.p() != data.p())
    throw std::invalid_argument("mh_sweep: direction/predictor dimension mismatch");

  const bool spike_slab = cfg.prior.kind == PriorKind::SpikeSlab;
  if (spike_slab && comp.m.size() != comp.direction.p() - 1)
    throw std::invalid_argument("mh_sweep: allocation length must be p-1");

  // Allocations and spike weight refresh from the pre-proposal angles.
  if (spike_slab && opt.update_m)
    gibbs_update_m(rng, comp.direction.theta(), comp.w, cfg.prior, comp.m);
  if (spike_slab && opt.update_w) comp.w = gibbs_update_w(rng, comp.m, cfg.prior);

  // vMF proposal; from_gamma folds it onto the chart's hemisphere. Indices
  // and scores use the canonical representative so that everything about the
  // post-sweep component is an exact function of its stored direction.
  const Direction prop_dir = Direction::from_gamma(sample_vmf(rng, comp.direction.gamma(), comp.lambda));

  const arma::vec u_cur =
      opt.current_indices ? *opt.current_indices : frobenius_index(data, comp.direction.gamma());
  const Scored cur = score_direction(comp.direction.theta(), comp.m, u_cur, residuals, cfg);
  arma::vec u_prop = frobenius_index(data, prop_dir.gamma());
  const Scored prp = score_direction(prop_dir.theta(), comp.m, u_prop, residuals, cfg);

  // log V < lp' - lp accepts; a NaN difference (both infinite) rejects.
  const double logv = std::log(1.0 - rng.uniform());
  const bool accept = logv < prp.lp - cur.lp;

  SweepResult res;
  res.accepted = accept;
  const Scored& chosen = accept ? prp : cur;
  if (accept) {
    comp.direction = prop_dir;
    res.indices = std::move(u_prop);
  } else {
    res.indices = u_cur;
  }
  res.log_post = chosen.lp;

  // Coefficient refresh at the post-sweep direction; the partial residuals
  // moved since the last sweep, so this happens on reject too.
  if (!chosen.usable)
    throw std::runtime_error("mh_sweep: component is stuck on degenerate indices");
  const PosteriorCoeffs pc = posterior_coeffs(chosen.basis, residuals, cfg.rho);
  comp.ridge.coeffs = pc.c0;
  comp.ridge.knots = chosen.knots;
  comp.ridge.center_offset = 0.0;  // stale after the refresh; caller recenters

  comp.accept_window.push_back(accept ? 1 : 0);
  return res;
}

}  // namespace ppbr
