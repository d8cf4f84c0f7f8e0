#include "ppbr/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ppbr/splines.hpp"

namespace ppbr {

namespace {

// Type-7 quantile: linear interpolation between order statistics.
double quantile7(arma::vec x, double q) {
  x = arma::sort(x);
  const double h = (double(x.n_elem) - 1.0) * q;
  const arma::uword k = arma::uword(std::floor(h));
  if (k + 1 >= x.n_elem) return x(x.n_elem - 1);
  return x(k) + (h - double(k)) * (x(k + 1) - x(k));
}

arma::uword chain_components(const Chain& chain) {
  if (chain.draws.empty()) throw std::invalid_argument("alignment: empty chain");
  return chain.draws.front().comps.size();
}

void check_assignment(const Chain& chain, const arma::umat& assignment) {
  if (assignment.n_rows != chain.draws.size())
    throw std::invalid_argument("assignment rows must match the draw count");
  if (assignment.n_elem > 0 && assignment.max() >= chain_components(chain))
    throw std::invalid_argument("assignment refers to a component the chain lacks");
}

}  // namespace

double mspe(const arma::vec& predictions, const arma::vec& truths) {
  if (predictions.n_elem != truths.n_elem || predictions.n_elem == 0)
    throw std::invalid_argument("mspe: need equal-length nonempty vectors");
  const arma::vec d = predictions - truths;
  return arma::dot(d, d) / double(d.n_elem);
}

double acs(const arma::vec& u, const arma::vec& v) {
  if (u.n_elem != v.n_elem) throw std::invalid_argument("acs: dimension mismatch");
  const double nu = arma::norm(u), nv = arma::norm(v);
  if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("acs: zero vector");
  return std::min(1.0, std::abs(arma::dot(u, v)) / (nu * nv));
}

AlignmentMap align(const Chain& chain, const std::vector<Direction>& reference) {
  const arma::uword k_count = chain_components(chain);
  if (reference.size() != k_count)
    throw std::invalid_argument("align: reference count must match the chain's components");
  const arma::uword draws = chain.draws.size();

  // total ACS of sampled component c against reference k, over all draws
  arma::mat score(k_count, k_count, arma::fill::zeros);
  for (const ModelState& s : chain.draws)
    for (arma::uword c = 0; c < k_count; ++c)
      for (arma::uword k = 0; k < k_count; ++k)
        score(c, k) += acs(s.comps[c].direction.gamma(), reference[k].gamma());

  AlignmentMap map;
  map.permutation.set_size(k_count);
  std::vector<bool> used(k_count, false);
  for (arma::uword k = 0; k < k_count; ++k) {
    arma::uword best = 0;
    double best_score = -1.0;
    for (arma::uword c = 0; c < k_count; ++c) {
      if (!used[c]) {
        if (score(c, k) > best_score) {
          best_score = score(c, k);
          best = c;
        }
      }
    }
    used[best] = true;
    map.permutation(k) = best;
  }

  map.sign_flips.set_size(draws, k_count);
  for (arma::uword k = 0; k < k_count; ++k) {
    const arma::vec& ref = reference[k].gamma();
    const arma::uword lstar = arma::abs(ref).index_max();
    for (arma::uword t = 0; t < draws; ++t) {
      const double drawn = chain.draws[t].comps[map.permutation(k)].direction.gamma()(lstar);
      map.sign_flips(t, k) = (ref(lstar) * drawn < 0.0) ? -1 : 1;
    }
  }
  return map;
}

arma::umat monotonicity_order(const Chain& chain, const Dataset& data) {
  const arma::uword k_count = chain_components(chain);
  const arma::uword draws = chain.draws.size();
  arma::umat order(draws, k_count);
  for (arma::uword t = 0; t < draws; ++t) {
    arma::vec corr(k_count);
    for (arma::uword c = 0; c < k_count; ++c) {
      const ComponentState& comp = chain.draws[t].comps[c];
      const arma::vec u = frobenius_index(data, comp.direction.gamma());
      const arma::vec g = eval_ridge(comp.ridge, u);
      const double r = arma::as_scalar(arma::cor(u, g));
      corr(c) = std::isfinite(r) ? r : 0.0;  // flat ridge: no monotone trend
    }
    std::vector<arma::uword> idx(k_count);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](arma::uword a, arma::uword b) { return corr(a) < corr(b); });
    for (arma::uword c = 0; c < k_count; ++c) order(t, c) = idx[c];
  }
  return order;
}

arma::umat assignment_matrix(const AlignmentMap& map, arma::uword n_draws) {
  arma::umat out(n_draws, map.permutation.n_elem);
  out.each_row() = map.permutation.t();
  return out;
}

std::pair<double, double> credible_interval(const arma::vec& samples, double level) {
  if (samples.n_elem < 2) throw std::invalid_argument("credible_interval: need >= 2 samples");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("credible_interval: level must be in (0, 1)");
  const double tail = 0.5 * (1.0 - level);
  return {quantile7(samples, tail), quantile7(samples, 1.0 - tail)};
}

std::vector<CoverageEntry> coverage_report(const Chain& chain, const AlignmentMap& map,
                                           const std::vector<Direction>& reference,
                                           double level) {
  const arma::uword k_count = chain_components(chain);
  if (reference.size() != k_count || map.permutation.n_elem != k_count)
    throw std::invalid_argument("coverage_report: component count mismatch");
  const arma::uword draws = chain.draws.size();
  const arma::uword p = reference.front().p();

  std::vector<CoverageEntry> out;
  out.reserve(k_count * p);
  arma::vec samples(draws);
  for (arma::uword k = 0; k < k_count; ++k) {
    for (arma::uword l = 0; l < p; ++l) {
      for (arma::uword t = 0; t < draws; ++t)
        samples(t) = double(map.sign_flips(t, k)) *
                     chain.draws[t].comps[map.permutation(k)].direction.gamma()(l);
      const auto [lo, hi] = credible_interval(samples, level);
      CoverageEntry e;
      e.component = k;
      e.coordinate = l;
      e.truth = reference[k].gamma()(l);
      e.lo = lo;
      e.hi = hi;
      e.cover = (e.truth >= lo && e.truth <= hi) ? 1.0 : 0.0;
      e.length = hi - lo;
      out.push_back(e);
    }
  }
  return out;
}

arma::mat acs_samples(const Chain& chain, const AlignmentMap& map,
                      const std::vector<Direction>& reference) {
  const arma::uword k_count = chain_components(chain);
  if (reference.size() != k_count || map.permutation.n_elem != k_count)
    throw std::invalid_argument("acs_samples: component count mismatch");
  arma::mat out(chain.draws.size(), k_count);
  for (arma::uword t = 0; t < chain.draws.size(); ++t)
    for (arma::uword k = 0; k < k_count; ++k)
      out(t, k) = acs(chain.draws[t].comps[map.permutation(k)].direction.gamma(),
                      reference[k].gamma());
  return out;
}

arma::mat truth_index_ranges(const std::vector<Direction>& reference, const Dataset& data) {
  arma::mat ranges(reference.size(), 2);
  for (size_t k = 0; k < reference.size(); ++k) {
    const arma::vec u = frobenius_index(data, reference[k].gamma());
    ranges(k, 0) = u.min();
    ranges(k, 1) = u.max();
  }
  return ranges;
}

arma::mat posterior_index_ranges(const Chain& chain, const arma::umat& assignment,
                                 const Dataset& data) {
  check_assignment(chain, assignment);
  const arma::uword k_count = assignment.n_cols;
  const arma::uword draws = chain.draws.size();
  arma::mat ranges(k_count, 2);
  arma::vec lo(draws), hi(draws);
  for (arma::uword k = 0; k < k_count; ++k) {
    for (arma::uword t = 0; t < draws; ++t) {
      const arma::vec u =
          frobenius_index(data, chain.draws[t].comps[assignment(t, k)].direction.gamma());
      lo(t) = u.min();
      hi(t) = u.max();
    }
    ranges(k, 0) = quantile7(lo, 0.5);
    ranges(k, 1) = quantile7(hi, 0.5);
  }
  return ranges;
}

RidgeSummary ridge_summary(const Chain& chain, const arma::umat& assignment,
                           const arma::mat& ranges, arma::uword n_points) {
  check_assignment(chain, assignment);
  const arma::uword k_count = assignment.n_cols;
  if (ranges.n_rows != k_count || ranges.n_cols != 2)
    throw std::invalid_argument("ridge_summary: ranges must be K x 2");
  if (!ranges.is_finite() || n_points < 1)
    throw std::invalid_argument("ridge_summary: need a finite grid");
  const arma::uword draws = chain.draws.size();

  RidgeSummary s;
  s.grid.set_size(n_points, k_count);
  s.median.set_size(n_points, k_count);
  s.lo.set_size(n_points, k_count);
  s.hi.set_size(n_points, k_count);
  for (arma::uword k = 0; k < k_count; ++k) {
    s.grid.col(k) = arma::linspace(ranges(k, 0), ranges(k, 1), n_points);
    arma::mat vals(draws, n_points);
    for (arma::uword t = 0; t < draws; ++t)
      vals.row(t) =
          eval_ridge(chain.draws[t].comps[assignment(t, k)].ridge, s.grid.col(k)).t();
    for (arma::uword g = 0; g < n_points; ++g) {
      s.median(g, k) = quantile7(vals.col(g), 0.5);
      s.lo(g, k) = quantile7(vals.col(g), 0.1);
      s.hi(g, k) = quantile7(vals.col(g), 0.9);
    }
  }
  return s;
}

double waic(const arma::mat& loglik) {
  if (loglik.n_cols < 2) throw std::invalid_argument("waic: need at least 2 draws");
  if (!loglik.is_finite()) throw std::invalid_argument("waic: non-finite log likelihood");
  const double log_s = std::log(double(loglik.n_cols));
  double total = 0.0;
  for (arma::uword i = 0; i < loglik.n_rows; ++i) {
    const arma::rowvec row = loglik.row(i);
    const double m = row.max();
    const double lppd = m + std::log(arma::accu(arma::exp(row - m))) - log_s;
    total += lppd - arma::var(row);  // var uses the S-1 denominator
  }
  return -2.0 * total;
}

}  // namespace ppbr
