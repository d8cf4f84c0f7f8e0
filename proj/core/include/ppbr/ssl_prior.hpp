#pragma once

#include <armadillo>
#include <vector>

namespace ppbr {

class Rng;

enum class PriorKind { SpikeSlab, Uniform };

// Prior on one direction's spherical angles. SpikeSlab puts a Laplace pair on
// each angle -- scale h0 (spike, pulls the coordinate to zero) under m_j = 1,
// scale h1 (slab) under m_j = 0 -- with a Beta(alpha_w, beta_w) hyperprior on
// the spike weight w. Uniform replaces all of it with U(-pi/2, pi/2) per
// angle; the chart Jacobian correction stays either way.
struct PriorSpec {
  PriorKind kind = PriorKind::SpikeSlab;
  double h0 = 0.05;
  double h1 = 1.0;
  double alpha_w = 1.0;
  double beta_w = 1.0;
  void validate() const;
};

// log psi_h(u) = -|u|/h - log(2h)
double laplace_logpdf(double u, double h);

// p(m_j = 1 | theta_j, w) = w psi_{h0} / (w psi_{h0} + (1-w) psi_{h1}),
// evaluated in log space so extreme |theta|/h ratios cannot overflow.
double spike_probability(double theta_j, double w, const PriorSpec& prior);

// log p(gamma | m) as a density in surface measure on the hemisphere: the
// per-angle prior terms minus the log chart Jacobian. +inf on the (measure
// zero) chart boundary, where the surface density genuinely diverges.
double log_prior_gamma(const arma::vec& theta, const std::vector<int>& m,
                       const PriorSpec& prior);

// One Gibbs pass over the allocations (SpikeSlab only).
void gibbs_update_m(Rng& rng, const arma::vec& theta, double w, const PriorSpec& prior,
                    std::vector<int>& m);

// Beta(sum m + alpha_w, sum(1-m) + beta_w) draw, clamped to [1e-12, 1-1e-12].
double gibbs_update_w(Rng& rng, const std::vector<int>& m, const PriorSpec& prior);

}  // namespace ppbr
