#include "ppbr/ssl_prior.hpp"

#include <cmath>
#include <stdexcept>

#include "ppbr/geometry.hpp"
#include "ppbr/rng.hpp"

namespace ppbr {

namespace {
constexpr double kLogPi = 1.14472988584940017414342735135305871;
constexpr double kWClamp = 1e-12;
}  // namespace

void PriorSpec::validate() const {
  if (kind == PriorKind::Uniform) return;
  if (!(h0 > 0.0) || !(h1 > 0.0) || !(h0 < h1))
    throw std::invalid_argument("prior: need 0 < h0 < h1");
  if (!(alpha_w > 0.0) || !(beta_w > 0.0))
    throw std::invalid_argument("prior: Beta hyperparameters must be positive");
}

double laplace_logpdf(double u, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("laplace_logpdf: scale must be positive");
  return -std::abs(u) / h - std::log(2.0 * h);
}

double spike_probability(double theta_j, double w, const PriorSpec& prior) {
  prior.validate();
  if (prior.kind != PriorKind::SpikeSlab)
    throw std::invalid_argument("spike_probability: only defined for the spike-and-slab prior");
  const double wc = std::clamp(w, kWClamp, 1.0 - kWClamp);
  const double l0 = std::log(wc) + laplace_logpdf(theta_j, prior.h0);
  const double l1 = std::log1p(-wc) + laplace_logpdf(theta_j, prior.h1);
  // 1 / (1 + exp(l1 - l0)) without forming either density
  const double d = l1 - l0;
  if (d > 0.0) {
    const double e = std::exp(-d);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(d));
}

double log_prior_gamma(const arma::vec& theta, const std::vector<int>& m,
                       const PriorSpec& prior) {
  prior.validate();
  if (theta.n_elem == 0) throw std::invalid_argument("log_prior_gamma: empty theta");
  double s = -log_jacobian(theta);  // density w.r.t. surface measure
  if (prior.kind == PriorKind::Uniform) return s - double(theta.n_elem) * kLogPi;
  if (m.size() != theta.n_elem)
    throw std::invalid_argument("log_prior_gamma: allocation length must match theta");
  for (arma::uword j = 0; j < theta.n_elem; ++j)
    s += laplace_logpdf(theta(j), m[j] ? prior.h0 : prior.h1);
  return s;
}

void gibbs_update_m(Rng& rng, const arma::vec& theta, double w, const PriorSpec& prior,
                    std::vector<int>& m) {
  if (m.size() != theta.n_elem)
    throw std::invalid_argument("gibbs_update_m: allocation length must match theta");
  for (arma::uword j = 0; j < theta.n_elem; ++j)
    m[j] = rng.bernoulli(spike_probability(theta(j), w, prior)) ? 1 : 0;
}

double gibbs_update_w(Rng& rng, const std::vector<int>& m, const PriorSpec& prior) {
  prior.validate();
  if (m.empty()) throw std::invalid_argument("gibbs_update_w: empty allocation vector");
  double spikes = 0.0;
  for (int v : m) spikes += v ? 1.0 : 0.0;
  const double w = rng.beta(spikes + prior.alpha_w, double(m.size()) - spikes + prior.beta_w);
  return std::clamp(w, kWClamp, 1.0 - kWClamp);
}

}  // namespace ppbr
