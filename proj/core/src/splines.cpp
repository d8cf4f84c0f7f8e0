#include "ppbr/splines.hpp"

#include <algorithm>
#include <cmath>

namespace ppbr {

namespace {

double quantile_type7(const arma::vec& sorted, double q) {
  const double h = (double(sorted.n_elem) - 1.0) * q;
  const arma::uword lo = arma::uword(std::floor(h));
  if (lo + 1 >= sorted.n_elem) return sorted(sorted.n_elem - 1);
  return sorted(lo) + (h - double(lo)) * (sorted(lo + 1) - sorted(lo));
}

// Shared by posterior_coeffs and marginal_score: eigendecomposition of the
// Gram matrix with the jitter rule applied, so both see the same spectrum.
struct GramEig {
  arma::vec eval;
  arma::mat evec;
};

GramEig gram_eig(const arma::mat& b) {
  const arma::mat gram = b.t() * b;
  GramEig ge;
  if (!arma::eig_sym(ge.eval, ge.evec, gram))
    throw std::runtime_error("splines: Gram eigendecomposition failed");
  const double top = ge.eval.max();
  if (ge.eval.min() < 1e-12 * top) {
    const double jitter = 1e-10 * arma::trace(gram) / double(b.n_cols);
    ge.eval += jitter;
  }
  return ge;
}

}  // namespace

KnotSet make_knots(const arma::vec& u, arma::uword basis_size) {
  if (basis_size < 2) throw std::invalid_argument("make_knots: basis size must be >= 2");
  if (u.n_elem < 2) throw std::invalid_argument("make_knots: need at least two indices");
  if (!u.is_finite()) throw std::invalid_argument("make_knots: non-finite indices");

  KnotSet ks;
  ks.lo = u.min();
  ks.hi = u.max();
  const double span = ks.hi - ks.lo;
  if (!(span > 0.0) || span < 1e-12 * std::max(1.0, std::abs(ks.lo)))
    throw degenerate_indices_error("make_knots: indices collapse to a single point");

  const arma::uword m = basis_size - 2;
  ks.interior.set_size(m);
  if (m == 0) return ks;

  const arma::vec sorted = arma::sort(u);
  for (arma::uword k = 0; k < m; ++k)
    ks.interior(k) = quantile_type7(sorted, double(k + 1) / double(basis_size - 1));

  // Enforce lo < t_1 < ... < t_m < hi. Ties climb up from lo, then anything
  // shoved past hi walks back down; the nudge is tiny relative to the span.
  const double nudge = 1e-9 * span;
  double prev = ks.lo;
  for (arma::uword k = 0; k < m; ++k) {
    if (ks.interior(k) <= prev) ks.interior(k) = prev + nudge;
    prev = ks.interior(k);
  }
  double next = ks.hi;
  for (arma::uword k = m; k-- > 0;) {
    if (ks.interior(k) >= next) ks.interior(k) = next - nudge;
    next = ks.interior(k);
  }
  if (ks.interior(0) <= ks.lo)
    throw degenerate_indices_error("make_knots: knot collision could not be resolved");
  return ks;
}

arma::vec eval_basis(double u, const KnotSet& knots) {
  const arma::uword j = knots.basis_size();
  arma::vec out(j);
  out(0) = 1.0;
  out(1) = u;
  if (j == 2) return out;

  const double hi = knots.hi;
  auto pos3 = [](double x) { return x > 0.0 ? x * x * x : 0.0; };
  auto d = [&](double knot) { return (pos3(u - knot) - pos3(u - hi)) / (hi - knot); };

  // full knot sequence is lo, interior..., hi; K-1 indexes the last interior
  const double d_last = d(knots.interior(j - 3));
  out(2) = d(knots.lo) - d_last;
  for (arma::uword k = 0; k + 3 < j; ++k) out(k + 3) = d(knots.interior(k)) - d_last;
  return out;
}

arma::mat basis_matrix(const arma::vec& u, const KnotSet& knots) {
  arma::mat b(u.n_elem, knots.basis_size());
  for (arma::uword i = 0; i < u.n_elem; ++i) b.row(i) = eval_basis(u(i), knots).t();
  return b;
}

PosteriorCoeffs posterior_coeffs(const arma::mat& b, const arma::vec& r, double rho) {
  if (b.n_rows != r.n_elem) throw std::invalid_argument("posterior_coeffs: shape mismatch");
  if (!(rho >= 0.0)) throw std::invalid_argument("posterior_coeffs: rho must be >= 0");
  const GramEig ge = gram_eig(b);
  PosteriorCoeffs pc;
  pc.sigma0 = ge.evec * arma::diagmat(1.0 / ge.eval) * ge.evec.t();
  pc.sigma_rho = ge.evec * arma::diagmat(1.0 / (ge.eval + rho)) * ge.evec.t();
  pc.c0 = pc.sigma_rho * (b.t() * r);
  return pc;
}

double marginal_score(const arma::mat& b, const arma::vec& r, double rho,
                      double alpha, double beta) {
  if (b.n_rows != r.n_elem) throw std::invalid_argument("marginal_score: shape mismatch");
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("marginal_score: alpha and beta must be positive");
  if (!(rho >= 0.0)) throw std::invalid_argument("marginal_score: rho must be >= 0");

  const GramEig ge = gram_eig(b);
  const arma::vec proj = ge.evec.t() * (b.t() * r);
  // bracket eigenvalue: 1/(l+rho) + 1/(2l) - l / (2 (l+rho)^2)
  double quad = 0.0;
  for (arma::uword i = 0; i < proj.n_elem; ++i) {
    const double l = ge.eval(i), lr = l + rho;
    quad += proj(i) * proj(i) * (1.0 / lr + 0.5 / l - 0.5 * l / (lr * lr));
  }
  const double s = std::max(0.0, arma::dot(r, r) - quad);  // >= 0 in exact arithmetic
  return -(alpha + 0.5 * double(r.n_elem)) * std::log(s + 2.0 * beta);
}

double eval_ridge(const RidgeFunction& g, double u) {
  return arma::dot(g.coeffs, eval_basis(u, g.knots)) - g.center_offset;
}

arma::vec eval_ridge(const RidgeFunction& g, const arma::vec& u) {
  arma::vec out(u.n_elem);
  for (arma::uword i = 0; i < u.n_elem; ++i) out(i) = eval_ridge(g, u(i));
  return out;
}

}  // namespace ppbr
