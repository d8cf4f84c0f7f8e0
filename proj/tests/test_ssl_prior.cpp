#include <armadillo>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ppbr/geometry.hpp"
#include "ppbr/rng.hpp"
#include "ppbr/ssl_prior.hpp"

using namespace ppbr;

TEST_SUITE("ssl_prior") {

TEST_CASE("laplace log-density formula") {
  // psi_h(u) = exp(-|u|/h) / (2h)
  CHECK(laplace_logpdf(0.3, 0.05) == doctest::Approx(-6.0 - std::log(0.1)).epsilon(1e-15));
  CHECK(laplace_logpdf(-0.3, 0.05) == laplace_logpdf(0.3, 0.05));
  CHECK(laplace_logpdf(0.0, 2.0) == doctest::Approx(-std::log(4.0)).epsilon(1e-15));
  CHECK_THROWS_AS((void)laplace_logpdf(0.1, 0.0), std::invalid_argument);
}

TEST_CASE("laplace density integrates to one") {
  const double h = 0.7;
  const double mass = oracle::adaptive_simpson(
      [&](double u) { return std::exp(laplace_logpdf(u, h)); }, -60.0 * h, 60.0 * h, 1e-12);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("spike probability matches the direct ratio") {
  PriorSpec prior;  // h0 = 0.05, h1 = 1
  const double w = 0.5, theta = 0.3;
  const double psi0 = std::exp(-std::abs(theta) / prior.h0) / (2.0 * prior.h0);
  const double psi1 = std::exp(-std::abs(theta) / prior.h1) / (2.0 * prior.h1);
  const double want = w * psi0 / (w * psi0 + (1.0 - w) * psi1);
  CHECK(spike_probability(theta, w, prior) == doctest::Approx(want).epsilon(1e-14));
  // frozen value of the fixture above
  CHECK(spike_probability(theta, w, prior) == doctest::Approx(0.06272199647673).epsilon(1e-10));
  // spike scale wins completely at theta = 0
  CHECK(spike_probability(0.0, 0.5, prior) == doctest::Approx(20.0 / 21.0).epsilon(1e-12));
}

TEST_CASE("spike probability survives extreme scale ratios") {
  PriorSpec prior;
  prior.h0 = 0.01;
  const double p = spike_probability(1.5, 0.5, prior);  // exp(-150) vs exp(-1.5)
  CHECK(p > 0.0);
  CHECK(p < 1e-60);
  const double q = spike_probability(0.0, 1.0 - 1e-16, prior);  // w clamps away from 1
  CHECK(q < 1.0);
  CHECK(std::isfinite(q));
}

TEST_CASE("log_prior_gamma sums angle terms minus the chart Jacobian") {
  PriorSpec prior;
  const arma::vec theta = {0.4, -0.2, 0.9};
  const std::vector<int> m = {1, 0, 0};
  const double want = laplace_logpdf(0.4, prior.h0) + laplace_logpdf(-0.2, prior.h1) +
                      laplace_logpdf(0.9, prior.h1) - log_jacobian(theta);
  CHECK(log_prior_gamma(theta, m, prior) == doctest::Approx(want).epsilon(1e-14));

  PriorSpec uni;
  uni.kind = PriorKind::Uniform;
  const double wantu = -3.0 * std::log(arma::datum::pi) - log_jacobian(theta);
  CHECK(log_prior_gamma(theta, {}, uni) == doctest::Approx(wantu).epsilon(1e-14));
}

TEST_CASE("log_prior_gamma diverges only on the chart boundary") {
  PriorSpec prior;
  const std::vector<int> m = {0, 0};
  CHECK(std::isinf(log_prior_gamma(arma::vec{arma::datum::pi / 2, 0.0}, m, prior)));
  CHECK(std::isfinite(log_prior_gamma(arma::vec{1.57, 0.0}, m, prior)));
  CHECK_THROWS_AS((void)log_prior_gamma(arma::vec{0.1, 0.2}, {0}, prior),
                  std::invalid_argument);
}

TEST_CASE("prior validation") {
  PriorSpec bad;
  bad.h0 = 1.0;
  bad.h1 = 0.5;  // spike wider than slab
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.h1 = 1.0;  // equal scales are also rejected
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  PriorSpec uni;
  uni.kind = PriorKind::Uniform;
  uni.h0 = -1.0;  // ignored for the uniform variant
  CHECK_NOTHROW(uni.validate());
}

TEST_CASE("allocation Gibbs frequencies match the conditional") {
  Rng rng(301);
  PriorSpec prior;
  const arma::vec theta = {0.12};
  const double w = 0.35;
  const double ptilde = spike_probability(theta(0), w, prior);
  std::vector<int> m(1, 0);
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    gibbs_update_m(rng, theta, w, prior, m);
    ones += m[0];
  }
  const double se = std::sqrt(ptilde * (1.0 - ptilde) / n);
  CHECK(std::abs(double(ones) / n - ptilde) < 3.0 * se);
}

TEST_CASE("weight Gibbs moments match the Beta full conditional") {
  Rng rng(307);
  PriorSpec prior;  // Beta(1, 1) hyperprior
  const std::vector<int> m = {1, 1, 0, 0, 0, 0, 0};  // 2 spikes of 7
  const double a = 2.0 + 1.0, b = 5.0 + 1.0;
  const int n = 100000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += gibbs_update_w(rng, m, prior);
  const double mean = a / (a + b);
  const double var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
  CHECK(std::abs(s / n - mean) < 3.0 * std::sqrt(var / n));
}

TEST_CASE("weight draws are clamped into the open interval") {
  Rng rng(311);
  PriorSpec prior;
  prior.alpha_w = 1e-8;  // pushes draws against 0
  const std::vector<int> m(5, 0);
  for (int i = 0; i < 2000; ++i) {
    const double w = gibbs_update_w(rng, m, prior);
    CHECK(w >= 1e-12);
    CHECK(w <= 1.0 - 1e-12);
  }
}

}  // TEST_SUITE
