#include "ppbr/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppbr/rng.hpp"

namespace ppbr {

namespace {

constexpr double kHalfPi = 1.57079632679489661923132169163975144;

void check_angles(const arma::vec& theta) {
  if (theta.n_elem == 0) throw std::invalid_argument("geometry: need at least one angle");
  for (double t : theta)
    if (!std::isfinite(t) || std::abs(t) > kHalfPi + 1e-12)
      throw std::invalid_argument("geometry: theta outside [-pi/2, pi/2]");
}

}  // namespace

arma::vec to_cartesian(const arma::vec& theta) {
  check_angles(theta);
  const arma::uword p = theta.n_elem + 1;
  arma::vec g(p);
  double cum = 1.0;  // running prod of cosines
  for (arma::uword l = 0; l + 1 < p; ++l) {
    const double t = std::clamp(theta(l), -kHalfPi, kHalfPi);
    g(l) = std::sin(t) * cum;
    cum *= std::cos(t);
  }
  g(p - 1) = std::max(cum, 0.0);  // cosines are >= 0 on the chart; clip roundoff
  return g;
}

arma::vec to_spherical(const arma::vec& gamma) {
  const arma::uword p = gamma.n_elem;
  if (p < 2) throw std::invalid_argument("geometry: need p >= 2");
  const double nrm = arma::norm(gamma);
  if (!std::isfinite(nrm) || std::abs(nrm - 1.0) > 1e-8)
    throw std::invalid_argument("geometry: gamma must be unit length within 1e-8");
  arma::vec g = gamma / nrm;
  if (g(p - 1) < 0) g = -g;

  // suffix(l) = sum_{j >= l} g_j^2. On the chart sqrt(suffix(l+1)) equals
  // cos(theta_l) * prod_{j<l} cos(theta_j) >= 0, so
  //   theta_l = atan2(g_l, sqrt(suffix(l+1)))
  // lands in [-pi/2, pi/2] with no prefix-product division. A zero suffix
  // means every later coordinate vanishes and the remaining angles are free;
  // atan2(0, 0) = 0 picks the conventional representative.
  arma::vec suffix(p + 1, arma::fill::zeros);
  for (arma::uword l = p; l-- > 0;) suffix(l) = suffix(l + 1) + g(l) * g(l);
  arma::vec theta(p - 1);
  for (arma::uword l = 0; l + 1 < p; ++l)
    theta(l) = std::atan2(g(l), std::sqrt(suffix(l + 1)));
  return theta;
}

double log_jacobian(const arma::vec& theta) {
  check_angles(theta);
  const arma::uword p = theta.n_elem + 1;
  double s = 0.0;
  // exponent p-1-j for the j-th angle (1-based), last angle exponent 0
  for (arma::uword j = 0; j + 2 < p; ++j) {
    // at |theta| = pi/2 the chart collapses; std::cos of the rounded pi/2 is
    // ~6e-17 rather than 0, so test the angle, not the cosine
    if (std::abs(theta(j)) >= kHalfPi) return -std::numeric_limits<double>::infinity();
    s += double(p - 2 - j) * std::log(std::cos(theta(j)));
  }
  return s;
}

arma::vec sample_vmf(Rng& rng, const arma::vec& mean_direction, double concentration) {
  const arma::uword p = mean_direction.n_elem;
  if (p < 2) throw std::invalid_argument("sample_vmf: need p >= 2");
  if (!(concentration >= 0.0)) throw std::invalid_argument("sample_vmf: negative concentration");
  const double nrm = arma::norm(mean_direction);
  if (!std::isfinite(nrm) || std::abs(nrm - 1.0) > 1e-8)
    throw std::invalid_argument("sample_vmf: mean direction must be unit length");
  const arma::vec mu = mean_direction / nrm;

  auto gaussian = [&rng](arma::uword n) {
    arma::vec v(n);
    for (auto& x : v) x = rng.normal();
    return v;
  };

  if (concentration == 0.0) {
    arma::vec v = gaussian(p);
    double vn = arma::norm(v);
    while (vn < 1e-12) {  // essentially impossible, but keep the law exact
      v = gaussian(p);
      vn = arma::norm(v);
    }
    return v / vn;
  }

  // Wood (1994): rejection envelope for the cosine w = <mu, x>.
  const double d = double(p) - 1.0;
  const double b = d / (std::sqrt(4.0 * concentration * concentration + d * d) + 2.0 * concentration);
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = concentration * x0 + d * std::log(1.0 - x0 * x0);
  double w;
  for (;;) {
    const double z = rng.beta(0.5 * d, 0.5 * d);
    const double u = 1.0 - rng.uniform();
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    if (concentration * w + d * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
  }

  // Uniform direction in the tangent space at mu.
  arma::vec v;
  double vn = 0.0;
  do {
    v = gaussian(p);
    v -= mu * arma::dot(mu, v);
    vn = arma::norm(v);
  } while (vn < 1e-12);
  v /= vn;

  arma::vec out = w * mu + std::sqrt(std::max(0.0, 1.0 - w * w)) * v;
  return out / arma::norm(out);  // scrub rounding drift; callers rely on unit norm
}

}  // namespace ppbr
