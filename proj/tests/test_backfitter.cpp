#include <armadillo>
#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ppbr/backfitter.hpp"
#include "ppbr/geometry.hpp"
#include "ppbr/rng.hpp"
#include "ppbr/splines.hpp"

using namespace ppbr;

namespace {

SymMatrix random_sym(Rng& rng, arma::uword p) {
  arma::mat a(p, p);
  for (arma::uword j = 0; j < p; ++j)
    for (arma::uword k = j; k < p; ++k) {
      a(j, k) = rng.normal();
      a(k, j) = a(j, k);
    }
  return SymMatrix::from_dense(a);
}

arma::vec random_direction(Rng& rng, arma::uword p) {
  arma::vec g(p);
  for (auto& v : g) v = rng.normal();
  g /= arma::norm(g);
  if (g(p - 1) < 0) g = -g;
  return g;
}

Dataset make_data(std::uint64_t seed, arma::uword n, arma::uword p, double noise_sd = 0.5) {
  Rng rng(seed);
  const arma::vec truth = random_direction(rng, p);
  Dataset d;
  d.y.set_size(n);
  d.m.reserve(n);
  for (arma::uword i = 0; i < n; ++i) {
    SymMatrix m = random_sym(rng, p);
    const double u = m.quad_form(truth);
    d.y(i) = 0.8 * u + 0.6 * std::sin(u) + noise_sd * rng.normal();
    d.m.push_back(std::move(m));
  }
  return d;
}

ComponentState make_component(const Dataset& data, const arma::vec& gamma,
                              arma::uword basis_size) {
  ComponentState comp;
  comp.direction = Direction::from_gamma(gamma);
  const arma::vec u = frobenius_index(data, comp.direction.gamma());
  comp.ridge.knots = make_knots(u, basis_size);
  comp.ridge.coeffs = arma::vec(basis_size, arma::fill::zeros);
  comp.m.assign(data.p() - 1, 0);
  return comp;
}

bool same_state(const ModelState& a, const ModelState& b) {
  if (a.mu != b.mu || a.sigma2 != b.sigma2 || a.comps.size() != b.comps.size()) return false;
  for (arma::uword k = 0; k < a.comps.size(); ++k) {
    const ComponentState& x = a.comps[k];
    const ComponentState& y = b.comps[k];
    if (!arma::all(x.direction.gamma() == y.direction.gamma())) return false;
    if (!arma::all(x.direction.theta() == y.direction.theta())) return false;
    if (!arma::all(x.ridge.coeffs == y.ridge.coeffs)) return false;
    if (x.ridge.center_offset != y.ridge.center_offset) return false;
    if (x.ridge.knots.lo != y.ridge.knots.lo || x.ridge.knots.hi != y.ridge.knots.hi) return false;
    if (!arma::all(x.ridge.knots.interior == y.ridge.knots.interior)) return false;
    if (x.m != y.m || x.w != y.w || x.lambda != y.lambda) return false;
    if (x.accept_window != y.accept_window) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("backfitter") {

TEST_CASE("partial residuals subtract every other component") {
  const Dataset data = make_data(3, 10, 3);
  Rng rng(17);
  ModelState state;
  state.mu = 1.5;
  for (int k = 0; k < 2; ++k) {
    ComponentState comp = make_component(data, random_direction(rng, 3), 4);
    for (auto& c : comp.ridge.coeffs) c = rng.normal();
    state.comps.push_back(std::move(comp));
  }

  const arma::vec r0 = partial_residuals(data, state, 0);
  const arma::vec fit1 =
      eval_ridge(state.comps[1].ridge, frobenius_index(data, state.comps[1].direction.gamma()));
  CHECK(arma::abs(r0 - (data.y - state.mu - fit1)).max() < 1e-12);

  // flat ridges leave y - mu for every component
  for (auto& comp : state.comps) comp.ridge.coeffs.zeros();
  CHECK(arma::all(partial_residuals(data, state, 0) == data.y - state.mu));
  CHECK(arma::all(partial_residuals(data, state, 1) == data.y - state.mu));

  // single component never subtracts anything
  ModelState single;
  single.mu = -0.3;
  single.comps.push_back(make_component(data, random_direction(rng, 3), 4));
  CHECK(arma::all(partial_residuals(data, single, 0) == data.y + 0.3));

  CHECK_THROWS_AS((void)partial_residuals(data, state, 2), std::invalid_argument);
}

TEST_CASE("ridge centering zeroes the training mean") {
  const Dataset data = make_data(9, 25, 3);
  Rng rng(5);
  ComponentState comp = make_component(data, random_direction(rng, 3), 5);
  for (auto& c : comp.ridge.coeffs) c = rng.normal(0.0, 2.0);
  const arma::vec u = frobenius_index(data, comp.direction.gamma());

  center_ridge(comp, data);
  CHECK(std::abs(arma::mean(eval_ridge(comp.ridge, u))) < 1e-12);

  // idempotent up to roundoff
  const double offset = comp.ridge.center_offset;
  center_ridge(comp, u);
  CHECK(std::abs(comp.ridge.center_offset - offset) < 1e-12 * std::max(1.0, std::abs(offset)));

  // a constant ridge becomes identically zero
  ComponentState flat = make_component(data, random_direction(rng, 3), 4);
  flat.ridge.coeffs(0) = 3.0;  // first basis function is the constant
  center_ridge(flat, data);
  CHECK(eval_ridge(flat.ridge, 0.17) == 0.0);
  CHECK(eval_ridge(flat.ridge, -2.4) == 0.0);
}

TEST_CASE("noise variance update draws from the right inverse gamma") {
  FitConfig cfg;
  cfg.sig_alpha = 1.0;
  cfg.sig_beta = 1.0;

  // zero residuals: parameters are (alpha + n/2, beta)
  Dataset data;
  const arma::uword n = 40;
  data.y = arma::vec(n, arma::fill::zeros);
  Rng gen(50);
  for (arma::uword i = 0; i < n; ++i) data.m.push_back(random_sym(gen, 2));
  ModelState state;
  state.mu = 0.0;

  Rng rng(1001);
  const arma::uword draws = 100000;
  arma::vec sample(draws);
  for (auto& s : sample) s = update_sigma2(rng, data, state, cfg);
  double want_mean = cfg.sig_beta / (cfg.sig_alpha + 0.5 * n - 1.0);
  CHECK(arma::mean(sample) == doctest::Approx(want_mean).epsilon(0.01));

  // fixed residual vector: mean within 3 standard errors of beta~/(alpha~-1)
  Rng ygen(51);
  for (auto& v : data.y) v = ygen.normal(0.4, 1.3);
  state.mu = 0.7;
  const double alpha_t = cfg.sig_alpha + 0.5 * n;
  const double beta_t =
      cfg.sig_beta + 0.5 * arma::accu(arma::square(data.y - state.mu));
  for (auto& s : sample) s = update_sigma2(rng, data, state, cfg);
  want_mean = beta_t / (alpha_t - 1.0);
  const double sd = beta_t / ((alpha_t - 1.0) * std::sqrt(alpha_t - 2.0));
  CHECK(std::abs(arma::mean(sample) - want_mean) < 3.0 * sd / std::sqrt(double(draws)));

  // empty data degrades to a prior draw
  Dataset empty;
  Rng ra(7), rb(7);
  CHECK(update_sigma2(ra, empty, state, cfg) == rb.inv_gamma(cfg.sig_alpha, cfg.sig_beta));
}

TEST_CASE("intercept update matches the conjugate normal formula") {
  FitConfig cfg;
  cfg.mu_mean = 0.4;
  cfg.mu_sd = 1.7;
  Dataset data;
  Rng gen(60);
  const arma::uword n = 12;
  data.y.set_size(n);
  for (auto& v : data.y) v = gen.normal(1.0, 2.0);
  for (arma::uword i = 0; i < n; ++i) data.m.push_back(random_sym(gen, 2));
  ModelState state;
  state.sigma2 = 2.3;

  const double b2 = cfg.mu_sd * cfg.mu_sd;
  const double v = 1.0 / (1.0 / b2 + double(n) / state.sigma2);
  const double m = v * (cfg.mu_mean / b2 + arma::accu(data.y) / state.sigma2);
  Rng ra(8), rb(8);
  CHECK(update_mu(ra, data, state, cfg) ==
        doctest::Approx(rb.normal(m, std::sqrt(v))).epsilon(1e-12));

  // flat-prior limit: posterior mean tends to the residual average
  cfg.mu_sd = 1e6;
  const double vf = 1.0 / (1.0 / 1e12 + double(n) / state.sigma2);
  const double mf = vf * (cfg.mu_mean / 1e12 + arma::accu(data.y) / state.sigma2);
  CHECK(mf == doctest::Approx(arma::mean(data.y)).epsilon(1e-6));
  CHECK(vf == doctest::Approx(state.sigma2 / double(n)).epsilon(1e-6));

  // empty data degrades to a prior draw
  Dataset empty;
  Rng rc(9), rd(9);
  cfg.mu_sd = 1.7;
  CHECK(update_mu(rc, empty, state, cfg) == rd.normal(cfg.mu_mean, cfg.mu_sd));
}

TEST_CASE("proposal concentration adapts on full windows only") {
  FitConfig cfg;  // window 100, band (0.2, 0.4), factor 1.1
  ComponentState comp;
  comp.lambda = 100.0;

  auto window = [](int total, int accepted) {
    std::vector<char> w(total, 0);
    std::fill(w.begin(), w.begin() + accepted, char(1));
    return w;
  };

  comp.accept_window = window(100, 10);
  adapt_lambda(comp, cfg);
  CHECK(comp.lambda == doctest::Approx(110.0).epsilon(1e-15));
  CHECK(comp.accept_window.empty());

  comp.lambda = 100.0;
  comp.accept_window = window(100, 50);
  adapt_lambda(comp, cfg);
  CHECK(comp.lambda == doctest::Approx(100.0 / 1.1).epsilon(1e-15));
  CHECK(comp.accept_window.empty());

  comp.lambda = 100.0;
  comp.accept_window = window(100, 30);
  adapt_lambda(comp, cfg);
  CHECK(comp.lambda == 100.0);
  CHECK(comp.accept_window.empty());

  // the band edges themselves do not trigger a change
  comp.accept_window = window(100, 20);
  adapt_lambda(comp, cfg);
  CHECK(comp.lambda == 100.0);
  comp.accept_window = window(100, 40);
  adapt_lambda(comp, cfg);
  CHECK(comp.lambda == 100.0);

  // partial windows are left to keep filling
  comp.accept_window = window(99, 0);
  adapt_lambda(comp, cfg);
  CHECK(comp.lambda == 100.0);
  CHECK(comp.accept_window.size() == 99);
}

TEST_CASE("initial state uses response moments and flat ridges") {
  Rng gen(70);
  Dataset data;
  data.y = arma::vec{1.0, 2.0, 3.0};
  for (int i = 0; i < 3; ++i) data.m.push_back(random_sym(gen, 3));
  FitConfig cfg;
  cfg.n_components = 1;

  const ModelState state = initialize(data, cfg);
  CHECK(state.mu == 2.0);
  CHECK(state.sigma2 == doctest::Approx(1.0).epsilon(1e-15));
  REQUIRE(state.comps.size() == 1);
  const ComponentState& comp = state.comps[0];
  CHECK(comp.w == 0.5);
  CHECK(comp.lambda == cfg.lambda_init);
  CHECK(comp.m == std::vector<int>(2, 0));
  CHECK(comp.accept_window.empty());
  CHECK(comp.direction.gamma()(2) >= 0.0);
  CHECK(eval_ridge(comp.ridge, 0.33) == 0.0);
  CHECK(std::isfinite(log_jacobian(comp.direction.theta())));

  // constant responses floor the variance and land on the axis guard
  Dataset flat;
  flat.y = arma::vec(10, arma::fill::value(5.0));
  for (int i = 0; i < 10; ++i) flat.m.push_back(random_sym(gen, 3));
  const ModelState fs = initialize(flat, cfg);
  CHECK(fs.sigma2 == 1e-12);
  CHECK(std::isfinite(log_jacobian(fs.comps[0].direction.theta())));

  Dataset tiny;
  tiny.y = arma::vec{1.0};
  tiny.m.push_back(random_sym(gen, 3));
  CHECK_THROWS_AS((void)initialize(tiny, cfg), std::invalid_argument);
}

TEST_CASE("initializer recovers a linear single index") {
  const arma::uword p = 5, n = 500;
  Rng rng(81);
  const arma::vec truth = random_direction(rng, p);
  Dataset data;
  data.y.set_size(n);
  for (arma::uword i = 0; i < n; ++i) {
    SymMatrix m = random_sym(rng, p);
    data.y(i) = m.quad_form(truth);  // g(u) = u, noiseless
    data.m.push_back(std::move(m));
  }
  FitConfig cfg;
  const ModelState state = initialize(data, cfg);
  CHECK(std::abs(arma::dot(state.comps[0].direction.gamma(), truth)) > 0.95);
}

TEST_CASE("initializer peels components sequentially") {
  const arma::uword p = 5, n = 600;
  Rng rng(82);
  arma::vec g1 = random_direction(rng, p);
  arma::vec g2 = random_direction(rng, p);
  g2 -= arma::dot(g1, g2) * g1;  // orthogonal pair keeps the fixture clean
  g2 /= arma::norm(g2);
  if (g2(p - 1) < 0) g2 = -g2;

  Dataset data;
  data.y.set_size(n);
  for (arma::uword i = 0; i < n; ++i) {
    SymMatrix m = random_sym(rng, p);
    data.y(i) = m.quad_form(g1) - 0.7 * m.quad_form(g2);
    data.m.push_back(std::move(m));
  }
  FitConfig cfg;
  cfg.n_components = 2;
  const ModelState state = initialize(data, cfg);
  CHECK(std::abs(arma::dot(state.comps[0].direction.gamma(), g1)) > 0.9);
  CHECK(std::abs(arma::dot(state.comps[1].direction.gamma(), g2)) > 0.9);
}

TEST_CASE("chain keeps exactly the post-warm-up draws") {
  const Dataset data = make_data(101, 40, 3);
  FitConfig cfg;
  cfg.iterations = 6;
  cfg.warmup = 5;
  const Chain chain = run_chain(data, cfg, Rng(505));
  CHECK(chain.draws.size() == 1);
  CHECK(chain.loglik.n_rows == 40);
  CHECK(chain.loglik.n_cols == 1);
  CHECK(chain.accept_rate.n_elem == 1);
  CHECK(chain.accept_rate(0) >= 0.0);
  CHECK(chain.accept_rate(0) <= 1.0);
}

TEST_CASE("chains are seed-deterministic") {
  const Dataset data = make_data(103, 50, 3);
  FitConfig cfg;
  cfg.iterations = 30;
  cfg.warmup = 10;
  const Chain a = run_chain(data, cfg, Rng(42, "fit"));
  const Chain b = run_chain(data, cfg, Rng(42, "fit"));
  REQUIRE(a.draws.size() == b.draws.size());
  for (arma::uword t = 0; t < a.draws.size(); ++t) REQUIRE(same_state(a.draws[t], b.draws[t]));
  CHECK(arma::all(arma::vectorise(a.loglik) == arma::vectorise(b.loglik)));
  CHECK(arma::all(a.accept_rate == b.accept_rate));
}

TEST_CASE("conjugate-only chain matches the grid posterior") {
  // With no ridge components the chain alternates the two conjugate draws;
  // its stationary law is known exactly up to quadrature over sigma^2. The
  // empirical marginals of a long run must match that law.
  const arma::uword n = 30;
  Rng gen(1234);
  Dataset data;
  data.y.set_size(n);
  for (auto& v : data.y) v = gen.normal(1.2, 1.5);
  for (arma::uword i = 0; i < n; ++i) data.m.push_back(random_sym(gen, 2));

  FitConfig cfg;
  cfg.sig_alpha = 2.0;
  cfg.sig_beta = 1.5;
  cfg.mu_mean = 0.0;
  cfg.mu_sd = 3.0;
  cfg.iterations = 100200;
  cfg.warmup = 200;

  ModelState start;
  start.mu = 0.0;
  start.sigma2 = 1.0;
  Sampler sampler(std::make_shared<const Dataset>(data), cfg, Rng(777), start);
  const Chain chain = sampler.run();
  const arma::uword draws = chain.draws.size();
  REQUIRE(draws == 100000);
  arma::vec mu_draws(draws), s2_draws(draws);
  for (arma::uword t = 0; t < draws; ++t) {
    mu_draws(t) = chain.draws[t].mu;
    s2_draws(t) = chain.draws[t].sigma2;
    REQUIRE(chain.draws[t].sigma2 > 0.0);
  }

  // Exact machinery: mu integrates out of the Gaussian likelihood in closed
  // form, leaving a 1-D density for s = log sigma^2 handled on a fine grid;
  // mu | sigma^2 stays Gaussian, so its marginal is a quadrature mixture.
  const double a = cfg.mu_mean, b2 = cfg.mu_sd * cfg.mu_sd;
  const double sum_y = arma::accu(data.y), sum_y2 = arma::dot(data.y, data.y);
  auto mu_var = [&](double sig2) { return 1.0 / (double(n) / sig2 + 1.0 / b2); };
  auto mu_mean = [&](double sig2) { return mu_var(sig2) * (sum_y / sig2 + a / b2); };
  auto log_post_s = [&](double s) {
    const double sig2 = std::exp(s);
    const double vt = mu_var(sig2), mt = mu_mean(sig2);
    double val = -(cfg.sig_alpha + 1.0) * s - cfg.sig_beta / sig2;        // IG prior
    val += -0.5 * double(n) * (std::log(sig2)) + 0.5 * std::log(vt);      // likelihood, mu out
    val += 0.5 * mt * mt / vt - 0.5 * (sum_y2 / sig2 + a * a / b2);
    return val + s;  // log-scale Jacobian
  };

  const arma::uword grid_n = 4001;
  const double s_hat = std::log(arma::var(data.y));
  const arma::vec sgrid = arma::linspace(s_hat - 4.0, s_hat + 4.0, grid_n);
  arma::vec logw(grid_n);
  for (arma::uword i = 0; i < grid_n; ++i) logw(i) = log_post_s(sgrid(i));
  arma::vec wts = arma::exp(logw - logw.max());
  wts /= arma::accu(wts);

  const arma::uword bins = 40;
  // sigma^2 marginal, binned on the log scale
  {
    const double lo = sgrid(0), hi = sgrid(grid_n - 1);
    arma::vec want(bins, arma::fill::zeros), got(bins, arma::fill::zeros);
    auto bin_of = [&](double s) {
      const double z = (s - lo) / (hi - lo) * double(bins);
      return std::min(bins - 1, arma::uword(std::max(0.0, z)));
    };
    for (arma::uword i = 0; i < grid_n; ++i) want(bin_of(sgrid(i))) += wts(i);
    for (arma::uword t = 0; t < draws; ++t) got(bin_of(std::log(s2_draws(t)))) += 1.0;
    got /= double(draws);
    CHECK(0.5 * arma::accu(arma::abs(got - want)) < 0.03);
  }
  // mu marginal via the Gaussian mixture CDF
  {
    const double lo = mu_draws.min() - 0.5, hi = mu_draws.max() + 0.5;
    auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    auto cdf = [&](double x) {
      double f = 0.0;
      for (arma::uword i = 0; i < grid_n; ++i) {
        const double sig2 = std::exp(sgrid(i));
        f += wts(i) * phi((x - mu_mean(sig2)) / std::sqrt(mu_var(sig2)));
      }
      return f;
    };
    arma::vec want(bins), got(bins, arma::fill::zeros);
    double prev = cdf(lo);
    const double total_lo = prev;
    for (arma::uword j = 0; j < bins; ++j) {
      const double edge = lo + (hi - lo) * double(j + 1) / double(bins);
      const double cur = cdf(edge);
      want(j) = cur - prev;
      prev = cur;
    }
    want(0) += total_lo;          // fold the negligible tails into the end bins
    want(bins - 1) += 1.0 - prev;
    for (arma::uword t = 0; t < draws; ++t) {
      const double z = (mu_draws(t) - lo) / (hi - lo) * double(bins);
      got(std::min(bins - 1, arma::uword(std::max(0.0, z)))) += 1.0;
    }
    got /= double(draws);
    CHECK(0.5 * arma::accu(arma::abs(got - want)) < 0.03);
  }
}

TEST_CASE("every stored draw is centered with positive noise variance") {
  const Dataset data = make_data(107, 60, 3);
  FitConfig cfg;
  cfg.n_components = 2;
  cfg.iterations = 40;
  cfg.warmup = 10;
  const Chain chain = run_chain(data, cfg, Rng(31337));
  REQUIRE(chain.draws.size() == 30);
  for (const ModelState& draw : chain.draws) {
    REQUIRE(draw.sigma2 > 0.0);
    for (const ComponentState& comp : draw.comps) {
      const arma::vec g =
          eval_ridge(comp.ridge, frobenius_index(data, comp.direction.gamma()));
      REQUIRE(std::abs(arma::mean(g)) < 1e-8 * std::max(1.0, arma::stddev(g)));
    }
  }
  CHECK(chain.loglik.is_finite());
}

TEST_CASE("checkpointed chains continue bit-for-bit") {
  const auto data = std::make_shared<const Dataset>(make_data(109, 50, 4));
  FitConfig cfg;
  cfg.n_components = 2;
  cfg.adapt_window = 10;  // let adaptation fire inside the test horizon
  Sampler a(data, cfg, Rng(2718));
  for (int t = 0; t < 30; ++t) a.step();

  Sampler copy = a;                                  // snapshot by copy
  Sampler fresh(data, cfg, a.rng(), a.state());      // snapshot by state + stream

  for (int t = 0; t < 25; ++t) {
    a.step();
    copy.step();
    fresh.step();
  }
  CHECK(same_state(a.state(), copy.state()));
  CHECK(same_state(a.state(), fresh.state()));
  CHECK(a.rng() == copy.rng());
  CHECK(a.rng() == fresh.rng());
}

TEST_CASE("pure noise keeps the noise variance near the response variance") {
  const arma::uword n = 400, p = 4;
  Rng gen(120);
  Dataset data;
  data.y.set_size(n);
  for (auto& v : data.y) v = gen.normal();
  for (arma::uword i = 0; i < n; ++i) data.m.push_back(random_sym(gen, p));

  FitConfig cfg;
  cfg.iterations = 800;
  cfg.warmup = 400;
  const Chain chain = run_chain(data, cfg, Rng(2121));
  double mean_s2 = 0.0;
  for (const auto& draw : chain.draws) mean_s2 += draw.sigma2;
  mean_s2 /= double(chain.draws.size());
  const double vy = arma::var(data.y);
  CHECK(mean_s2 > 0.8 * vy);
  CHECK(mean_s2 < 1.2 * vy);
}

TEST_CASE("prediction averages the per-draw fits") {
  const Dataset data = make_data(111, 20, 2);
  Rng rng(9);

  Chain chain;
  for (int t = 0; t < 3; ++t) {
    ModelState s;
    s.mu = 0.5 * t;
    s.sigma2 = 1.0;
    ComponentState comp = make_component(data, random_direction(rng, 2), 4);
    for (auto& c : comp.ridge.coeffs) c = rng.normal();
    s.comps.push_back(std::move(comp));
    chain.draws.push_back(std::move(s));
  }

  std::vector<SymMatrix> fresh;
  for (int i = 0; i < 4; ++i) fresh.push_back(random_sym(rng, 2));

  const arma::mat per_draw = predict_draws(chain, fresh);
  REQUIRE(per_draw.n_rows == 4);
  REQUIRE(per_draw.n_cols == 3);
  for (arma::uword t = 0; t < 3; ++t) {
    const ModelState& s = chain.draws[t];
    for (arma::uword i = 0; i < 4; ++i) {
      const double u = fresh[i].quad_form(s.comps[0].direction.gamma());
      const double want = s.mu + eval_ridge(s.comps[0].ridge, u);
      REQUIRE(per_draw(i, t) == doctest::Approx(want).epsilon(1e-12));
    }
  }
  const arma::vec point = predict_mean(chain, fresh);
  CHECK(arma::abs(point - arma::mean(per_draw, 1)).max() < 1e-15);

  // a single draw predicts exactly its own fit
  Chain one;
  one.draws.push_back(chain.draws[2]);
  CHECK(arma::all(predict_mean(one, fresh) == per_draw.col(2)));

  // flat ridges predict the intercept average everywhere
  Chain flat = chain;
  for (auto& s : flat.draws) {
    s.comps[0].ridge.coeffs.zeros();
    s.comps[0].ridge.center_offset = 0.0;
  }
  const arma::vec fp = predict_mean(flat, fresh);
  for (arma::uword i = 0; i < 4; ++i) CHECK(fp(i) == doctest::Approx(0.5).epsilon(1e-15));

  Chain none;
  CHECK_THROWS_AS((void)predict_draws(none, fresh), std::invalid_argument);
}

TEST_CASE("sampler constructor rejects inconsistent pieces") {
  const auto data = std::make_shared<const Dataset>(make_data(113, 15, 3));
  FitConfig cfg;
  cfg.n_components = 2;

  ModelState state = initialize(*data, cfg);
  state.comps.pop_back();  // 1 component against a 2-component config
  CHECK_THROWS_AS(Sampler(data, cfg, Rng(1), state), std::invalid_argument);

  ModelState bad_sigma = initialize(*data, cfg);
  bad_sigma.sigma2 = 0.0;
  CHECK_THROWS_AS(Sampler(data, cfg, Rng(1), bad_sigma), std::invalid_argument);

  CHECK_THROWS_AS(Sampler(nullptr, cfg, Rng(1)), std::invalid_argument);

  // empty component list is the conjugate-only testing shape, still valid
  ModelState none;
  none.sigma2 = 1.0;
  Sampler conj(data, cfg, Rng(1), none);
  conj.step();
  CHECK(conj.state().comps.empty());
}

}  // TEST_SUITE
