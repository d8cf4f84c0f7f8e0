#include "ppbr/types.hpp"

#include <algorithm>
#include <cmath>

#include "ppbr/geometry.hpp"

namespace ppbr {

SymMatrix SymMatrix::from_dense(const arma::mat& m, double tol) {
  if (m.n_rows != m.n_cols || m.n_rows == 0)
    throw std::invalid_argument("sym_matrix: dense input must be square and nonempty");
  if (!m.is_finite()) throw std::invalid_argument("sym_matrix: non-finite entries");
  const double scale = std::max(1.0, arma::abs(m).max());
  SymMatrix out(m.n_rows);
  for (arma::uword j = 0; j < m.n_rows; ++j)
    for (arma::uword k = j; k < m.n_cols; ++k) {
      if (std::abs(m(j, k) - m(k, j)) > tol * scale)
        throw std::invalid_argument("sym_matrix: input not symmetric within tolerance");
      out.packed_at(j, k) = 0.5 * (m(j, k) + m(k, j));
    }
  return out;
}

SymMatrix SymMatrix::from_packed(arma::uword p, arma::vec packed) {
  if (p == 0 || packed.n_elem != p * (p + 1) / 2)
    throw std::invalid_argument("sym_matrix: packed length must be p(p+1)/2");
  if (!packed.is_finite()) throw std::invalid_argument("sym_matrix: non-finite entries");
  SymMatrix out;
  out.p_ = p;
  out.upper_ = std::move(packed);
  return out;
}

arma::mat SymMatrix::dense() const {
  arma::mat out(p_, p_);
  for (arma::uword j = 0; j < p_; ++j)
    for (arma::uword k = j; k < p_; ++k) out(j, k) = out(k, j) = (*this)(j, k);
  return out;
}

double SymMatrix::quad_form(const arma::vec& g) const {
  if (g.n_elem != p_) throw std::invalid_argument("sym_matrix: dimension mismatch in quad_form");
  double acc = 0.0;
  const double* u = upper_.memptr();
  for (arma::uword j = 0; j < p_; ++j) {
    double row = *u++ * g(j);  // diagonal entry
    for (arma::uword k = j + 1; k < p_; ++k) row += 2.0 * *u++ * g(k);
    acc += g(j) * row;
  }
  return acc;
}

Direction Direction::from_gamma(const arma::vec& gamma) {
  if (gamma.n_elem < 2) throw std::invalid_argument("direction: need p >= 2");
  const double nrm = arma::norm(gamma);
  if (std::abs(nrm - 1.0) > 1e-8)
    throw std::invalid_argument("direction: gamma must be unit length within 1e-8");
  Direction d;
  d.gamma_ = gamma / nrm;
  if (d.gamma_(d.gamma_.n_elem - 1) < 0) d.gamma_ = -d.gamma_;  // hemisphere representative
  d.theta_ = to_spherical(d.gamma_);
  return d;
}

Direction Direction::from_theta(const arma::vec& theta) {
  Direction d;
  d.gamma_ = to_cartesian(theta);  // validates the angle ranges
  d.theta_ = theta;
  return d;
}

Direction Direction::from_parts(arma::vec gamma, arma::vec theta) {
  if (gamma.n_elem < 2 || theta.n_elem + 1 != gamma.n_elem)
    throw std::invalid_argument("direction: inconsistent coordinate lengths");
  if (std::abs(arma::norm(gamma) - 1.0) > 1e-8)
    throw std::invalid_argument("direction: gamma must be unit length within 1e-8");
  if (gamma(gamma.n_elem - 1) < 0)
    throw std::invalid_argument("direction: gamma must lie on the canonical hemisphere");
  if (arma::abs(to_cartesian(theta) - gamma).max() > 1e-6)
    throw std::invalid_argument("direction: theta does not reproduce gamma");
  Direction d;
  d.gamma_ = std::move(gamma);
  d.theta_ = std::move(theta);
  return d;
}

void Dataset::validate() const {
  if (y.n_elem == 0 || m.size() != y.n_elem)
    throw std::invalid_argument("dataset: need n >= 1 responses with one matrix each");
  if (!y.is_finite()) throw std::invalid_argument("dataset: non-finite response");
  const arma::uword dim = m.front().dim();
  if (dim < 2) throw std::invalid_argument("dataset: predictors must be at least 2 x 2");
  for (const auto& mi : m)
    if (mi.dim() != dim) throw std::invalid_argument("dataset: mixed predictor dimensions");
}

double frobenius_index(const SymMatrix& m, const arma::vec& gamma) {
  return m.quad_form(gamma);
}

double frobenius_index(const SymMatrix& m, const Direction& d) {
  return m.quad_form(d.gamma());
}

arma::vec frobenius_index(const Dataset& data, const arma::vec& gamma) {
  arma::vec u(data.n());
  for (arma::uword i = 0; i < data.n(); ++i) u(i) = data.m[i].quad_form(gamma);
  return u;
}

IdentifiabilityReport check_identifiability(const std::vector<Direction>& dirs, double rel_tol) {
  if (dirs.empty()) throw std::invalid_argument("check_identifiability: empty direction set");
  const arma::uword p = dirs.front().p();
  const arma::uword k = dirs.size();
  arma::mat gam(p, k);
  for (arma::uword i = 0; i < k; ++i) {
    if (dirs[i].p() != p)
      throw std::invalid_argument("check_identifiability: mixed direction dimensions");
    gam.col(i) = dirs[i].gamma();
  }

  auto rank_of = [&](const arma::mat& a) {
    arma::vec s = arma::svd(a);
    return arma::uword(arma::sum(s > rel_tol * s.max()));
  };

  IdentifiabilityReport rep;
  rep.rank_ok = rank_of(gam) == k;
  rep.hadamard_rank_ok = rank_of(gam % gam) == k;
  rep.min_pairwise_angle = arma::datum::pi / 2;
  for (arma::uword i = 0; i < k; ++i)
    for (arma::uword j = i + 1; j < k; ++j) {
      const double c = std::min(1.0, std::abs(arma::dot(gam.col(i), gam.col(j))));
      rep.min_pairwise_angle = std::min(rep.min_pairwise_angle, std::acos(c));
    }
  return rep;
}

}  // namespace ppbr
