#include "ppbr/backfitter.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ppbr/geometry.hpp"
#include "ppbr/sim_sampler.hpp"
#include "ppbr/splines.hpp"

namespace ppbr {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

arma::vec component_fit(const Dataset& data, const ComponentState& comp) {
  return eval_ridge(comp.ridge, frobenius_index(data, comp.direction.gamma()));
}

arma::vec fitted_totals(const Dataset& data, const ModelState& state) {
  arma::vec total(data.n(), arma::fill::zeros);
  for (const auto& comp : state.comps) total += component_fit(data, comp);
  return total;
}

}  // namespace

arma::vec partial_residuals(const Dataset& data, const ModelState& state, arma::uword k) {
  if (k >= state.comps.size())
    throw std::invalid_argument("partial_residuals: component index out of range");
  arma::vec r = data.y - state.mu;
  for (arma::uword l = 0; l < state.comps.size(); ++l)
    if (l != k) r -= component_fit(data, state.comps[l]);
  return r;
}

void center_ridge(ComponentState& comp, const arma::vec& indices) {
  if (indices.n_elem == 0) return;
  comp.ridge.center_offset += arma::mean(eval_ridge(comp.ridge, indices));
}

void center_ridge(ComponentState& comp, const Dataset& data) {
  center_ridge(comp, frobenius_index(data, comp.direction.gamma()));
}

double update_sigma2(Rng& rng, const Dataset& data, const ModelState& state,
                     const FitConfig& cfg) {
  // n = 0 degrades to a plain prior draw: both parameters keep their prior
  // values because the residual sum is empty.
  const arma::vec resid = data.y - state.mu - fitted_totals(data, state);
  return rng.inv_gamma(cfg.sig_alpha + 0.5 * double(data.n()),
                       cfg.sig_beta + 0.5 * arma::dot(resid, resid));
}

double update_mu(Rng& rng, const Dataset& data, const ModelState& state, const FitConfig& cfg) {
  const double b2 = cfg.mu_sd * cfg.mu_sd;
  const arma::vec e = data.y - fitted_totals(data, state);
  const double v = 1.0 / (1.0 / b2 + double(data.n()) / state.sigma2);
  const double m = v * (cfg.mu_mean / b2 + arma::accu(e) / state.sigma2);
  return rng.normal(m, std::sqrt(v));
}

void adapt_lambda(ComponentState& comp, const FitConfig& cfg) {
  if (comp.accept_window.size() < cfg.adapt_window) return;
  double accepted = 0.0;
  for (char flag : comp.accept_window) accepted += flag;
  const double rate = accepted / double(comp.accept_window.size());
  if (rate < cfg.adapt_rate_lo)
    comp.lambda *= cfg.adapt_factor;
  else if (rate > cfg.adapt_rate_hi)
    comp.lambda /= cfg.adapt_factor;
  comp.accept_window.clear();
}

namespace {

// Directions on a coordinate axis sit on the chart boundary, where the prior
// density in gamma is singular and a Metropolis chain cannot move. Tilt such
// a starting point slightly off the axis, deterministically.
Direction off_boundary(arma::vec g) {
  const arma::uword p = g.n_elem;
  arma::vec tilt = arma::regspace(1.0, double(p));
  tilt /= arma::norm(tilt);
  double eps = 1e-6;
  Direction dir = Direction::from_gamma(g);
  while (!std::isfinite(log_jacobian(dir.theta()))) {
    arma::vec nudged = g + eps * tilt;
    dir = Direction::from_gamma(nudged / arma::norm(nudged));
    eps *= 2.0;
  }
  return dir;
}

}  // namespace

ModelState initialize(const Dataset& data, const FitConfig& cfg) {
  cfg.validate();
  data.validate();
  const arma::uword n = data.n();
  const arma::uword p = data.p();
  if (n < 2) throw std::invalid_argument("initialize: need at least two observations");

  ModelState state;
  state.mu = arma::mean(data.y);
  state.sigma2 = std::max(arma::var(data.y), 1e-12);

  // Ridge-regress running residuals on the packed upper triangles, reassemble
  // the coefficients into a symmetric matrix (off-diagonals halved, since the
  // packed entries count those cells twice), and take the eigenvector of the
  // largest-magnitude eigenvalue as the starting direction. A linear fit in
  // the resulting index is peeled off before the next component.
  const arma::uword q = p * (p + 1) / 2;
  arma::mat x(n, q);
  for (arma::uword i = 0; i < n; ++i) x.row(i) = data.m[i].packed().t();
  x.each_row() -= arma::mean(x, 0);
  const arma::mat gram = x.t() * x;
  const double tau = 1e-3 * arma::trace(gram) / double(q);
  arma::vec resid = data.y - state.mu;

  for (arma::uword k = 0; k < cfg.n_components; ++k) {
    const arma::vec b =
        arma::solve(gram + tau * arma::eye(q, q), x.t() * resid, arma::solve_opts::likely_sympd);
    arma::mat a(p, p);
    arma::uword pos = 0;
    for (arma::uword j = 0; j < p; ++j)
      for (arma::uword l = j; l < p; ++l) {
        a(j, l) = (j == l) ? b(pos) : 0.5 * b(pos);
        a(l, j) = a(j, l);
        ++pos;
      }
    arma::vec eigval;
    arma::mat eigvec;
    arma::eig_sym(eigval, eigvec, a);
    const Direction dir = off_boundary(eigvec.col(arma::abs(eigval).index_max()));

    ComponentState comp;
    comp.direction = dir;
    const arma::vec u = frobenius_index(data, dir.gamma());
    comp.ridge.knots = make_knots(u, cfg.basis_size);
    comp.ridge.coeffs = arma::vec(cfg.basis_size, arma::fill::zeros);
    comp.ridge.center_offset = 0.0;
    comp.m.assign(p - 1, 0);  // all slab
    comp.w = 0.5;
    comp.lambda = cfg.lambda_init;
    state.comps.push_back(std::move(comp));

    arma::mat lin(n, 2, arma::fill::ones);
    lin.col(1) = u;
    resid -= lin * arma::solve(lin, resid);
  }
  return state;
}

namespace {

ModelState init_start(const std::shared_ptr<const Dataset>& data, const FitConfig& cfg) {
  if (!data) throw std::invalid_argument("sampler: null dataset");
  return initialize(*data, cfg);
}

}  // namespace

Sampler::Sampler(std::shared_ptr<const Dataset> data, FitConfig cfg, Rng rng)
    : Sampler(data, cfg, rng, init_start(data, cfg)) {}

Sampler::Sampler(std::shared_ptr<const Dataset> data, FitConfig cfg, Rng rng, ModelState start)
    : data_(std::move(data)), cfg_(std::move(cfg)), rng_(rng), state_(std::move(start)) {
  if (!data_) throw std::invalid_argument("sampler: null dataset");
  cfg_.validate();
  data_->validate();
  if (!state_.comps.empty() && state_.comps.size() != cfg_.n_components)
    throw std::invalid_argument("sampler: state/config component count mismatch");
  for (const auto& comp : state_.comps) {
    if (comp.direction.p() != data_->p())
      throw std::invalid_argument("sampler: direction/predictor dimension mismatch");
    if (comp.ridge.coeffs.n_elem != comp.ridge.knots.basis_size())
      throw std::invalid_argument("sampler: ridge coefficient/knot size mismatch");
  }
  if (!(state_.sigma2 > 0.0)) throw std::invalid_argument("sampler: sigma2 must be positive");
  const arma::uword k = state_.comps.size();
  accepts_ = arma::vec(k, arma::fill::zeros);
  sweeps_ = arma::vec(k, arma::fill::zeros);
  refresh_cache();
}

void Sampler::refresh_cache() {
  const arma::uword n = data_->n();
  const arma::uword k = state_.comps.size();
  idx_.set_size(n, k);
  fit_.set_size(n, k);
  for (arma::uword j = 0; j < k; ++j) {
    idx_.col(j) = frobenius_index(*data_, state_.comps[j].direction.gamma());
    fit_.col(j) = eval_ridge(state_.comps[j].ridge, idx_.col(j));
  }
}

void Sampler::step() {
  const arma::uword k = state_.comps.size();
  for (arma::uword j = 0; j < k; ++j) {
    arma::vec r = data_->y - state_.mu;
    for (arma::uword l = 0; l < k; ++l)
      if (l != j) r -= fit_.col(l);

    const arma::vec cur_idx = idx_.col(j);
    SweepOptions opt;
    opt.current_indices = &cur_idx;
    const SweepResult res = mh_sweep(rng_, state_.comps[j], r, *data_, cfg_, opt);

    idx_.col(j) = res.indices;
    center_ridge(state_.comps[j], idx_.col(j));
    fit_.col(j) = eval_ridge(state_.comps[j].ridge, idx_.col(j));
    accepts_(j) += res.accepted ? 1.0 : 0.0;
    sweeps_(j) += 1.0;
  }
  // sigma^2 conditions on the intercept from the previous iteration; mu then
  // conditions on the fresh sigma^2.
  state_.sigma2 = update_sigma2(rng_, *data_, state_, cfg_);
  state_.mu = update_mu(rng_, *data_, state_, cfg_);
  for (auto& comp : state_.comps) adapt_lambda(comp, cfg_);
  ++iter_;
}

void Sampler::record(Chain& chain, arma::uword col) const {
  chain.draws.push_back(state_);
  const arma::uword n = data_->n();
  arma::vec total(n, arma::fill::zeros);
  for (arma::uword j = 0; j < state_.comps.size(); ++j) total += fit_.col(j);
  const double s2 = state_.sigma2;
  const double cst = -0.5 * std::log(kTwoPi * s2);
  for (arma::uword i = 0; i < n; ++i) {
    const double d = data_->y(i) - state_.mu - total(i);
    chain.loglik(i, col) = cst - 0.5 * d * d / s2;
  }
  if (!chain.loglik.col(col).is_finite()) {
    std::ostringstream msg;
    msg << "run_chain: non-finite log-likelihood at iteration " << iter_ << " (mu=" << state_.mu
        << ", sigma2=" << s2 << ")";
    throw std::runtime_error(msg.str());
  }
}

Chain Sampler::run() {
  const arma::uword kept = cfg_.iterations - cfg_.warmup;
  Chain chain;
  chain.config = cfg_;
  chain.draws.reserve(kept);
  chain.loglik.set_size(data_->n(), kept);
  for (arma::uword t = 0; t < cfg_.iterations; ++t) {
    step();
    if (t >= cfg_.warmup) record(chain, t - cfg_.warmup);
  }
  chain.accept_rate = sweeps_.n_elem ? arma::vec(accepts_ / sweeps_) : arma::vec();
  return chain;
}

Chain run_chain(const Dataset& data, const FitConfig& cfg, Rng rng) {
  Sampler sampler(std::make_shared<const Dataset>(data), cfg, std::move(rng));
  return sampler.run();
}

arma::mat predict_draws(const Chain& chain, const std::vector<SymMatrix>& m) {
  if (chain.draws.empty()) throw std::invalid_argument("predict: chain has no draws");
  const arma::uword n = m.size();
  const arma::uword t = chain.draws.size();
  arma::mat out(n, t);
  for (arma::uword s = 0; s < t; ++s) {
    const ModelState& draw = chain.draws[s];
    for (const auto& comp : draw.comps)
      if (n && comp.direction.p() != m.front().dim())
        throw std::invalid_argument("predict: predictor dimension mismatch");
    for (arma::uword i = 0; i < n; ++i) {
      double v = draw.mu;
      for (const auto& comp : draw.comps)
        v += eval_ridge(comp.ridge, frobenius_index(m[i], comp.direction.gamma()));
      out(i, s) = v;
    }
  }
  return out;
}

arma::vec predict_mean(const Chain& chain, const std::vector<SymMatrix>& m) {
  return arma::mean(predict_draws(chain, m), 1);
}

}  // namespace ppbr
