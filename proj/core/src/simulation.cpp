#include "ppbr/simulation.hpp"

#include <cmath>
#include <stdexcept>

namespace ppbr {

void ScenarioSpec::validate() const {
  if (kind == ScenarioKind::CorrectlySpecified) {
    if (p < 5) throw std::invalid_argument("scenario: directions need p >= 5 for 4 nonzeros");
    if (n_components < 1 || n_components > 4)
      throw std::invalid_argument("scenario: between 1 and 4 components (4 links defined)");
  } else {
    if (p < 9) throw std::invalid_argument("scenario: factor columns need p >= 9 for 8 nonzeros");
    if (rank < 1) throw std::invalid_argument("scenario: rank must be >= 1");
  }
  if (n_train < 1 || n_test < 1) throw std::invalid_argument("scenario: empty split");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("scenario: negative noise variance");
}

arma::mat sample_orthonormal(Rng& rng, arma::uword p) {
  if (p < 1) throw std::invalid_argument("sample_orthonormal: p must be >= 1");
  arma::mat g(p, p);
  for (arma::uword j = 0; j < p; ++j)
    for (arma::uword i = 0; i < p; ++i) g(i, j) = rng.normal();
  arma::mat q, r;
  if (!arma::qr(q, r, g)) throw std::runtime_error("sample_orthonormal: QR failed");
  // Fixing the R diagonal's signs makes the decomposition unique, which turns
  // the Gaussian's rotation invariance into exact Haar distribution for Q.
  for (arma::uword j = 0; j < p; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

std::vector<SymMatrix> gen_predictors(Rng& rng, arma::uword p, arma::uword n) {
  std::vector<SymMatrix> out;
  out.reserve(n);
  for (arma::uword i = 0; i < n; ++i) {
    const arma::mat a = sample_orthonormal(rng, p);
    arma::vec e(p);
    for (auto& v : e) v = rng.uniform(-10.0, 10.0);
    out.push_back(SymMatrix::from_dense(a * arma::diagmat(e) * a.t()));
  }
  return out;
}

namespace {

// Zeroes `zeros` uniformly chosen entries of v in place (partial Fisher-Yates
// over the index set).
void sparsify(Rng& rng, arma::vec& v, arma::uword zeros) {
  const arma::uword p = v.n_elem;
  std::vector<arma::uword> idx(p);
  for (arma::uword j = 0; j < p; ++j) idx[j] = j;
  for (arma::uword j = 0; j < zeros; ++j) {
    std::swap(idx[j], idx[j + rng.integer(p - j)]);
    v(idx[j]) = 0.0;
  }
}

}  // namespace

std::vector<Direction> gen_directions(Rng& rng, arma::uword p, arma::uword k) {
  if (p < 5) throw std::invalid_argument("gen_directions: need p >= 5");
  const arma::mat v = sample_orthonormal(rng, p);
  std::vector<Direction> out;
  out.reserve(k);
  for (arma::uword c = 0; c < k; ++c) {
    arma::vec alpha;
    do {
      arma::vec q(p);
      for (auto& x : q) x = rng.uniform();
      alpha = v * q;
      sparsify(rng, alpha, p - 4);
    } while (arma::norm(alpha) == 0.0);  // probability-zero guard
    out.push_back(Direction::from_gamma(alpha / arma::norm(alpha)));
  }
  return out;
}

double link_function(int which, double u) {
  switch (which) {
    case 1: return -u;
    case 2: return -u * u / 4.0;
    case 3: return 2.0 * std::exp(-u / 5.0);
    case 4: return u * u / 4.0;
    default: throw std::invalid_argument("link_function: id must be in 1..4");
  }
}

namespace {

arma::vec frobenius_with(const std::vector<SymMatrix>& m, const arma::mat& u_factor) {
  // <M, U U'> = sum over columns u of u' M u
  arma::vec v(m.size(), arma::fill::zeros);
  for (arma::uword i = 0; i < m.size(); ++i)
    for (arma::uword c = 0; c < u_factor.n_cols; ++c) v(i) += m[i].quad_form(u_factor.col(c));
  return v;
}

}  // namespace

ScenarioData gen_scenario(const ScenarioSpec& spec) {
  spec.validate();
  Rng rng(spec.seed, "simulate");

  ScenarioData out;
  out.truth.kind = spec.kind;
  out.truth.sigma2 = spec.sigma2;

  if (spec.kind == ScenarioKind::CorrectlySpecified) {
    out.truth.directions = gen_directions(rng, spec.p, spec.n_components);
    const IdentifiabilityReport report = check_identifiability(out.truth.directions);
    if (!report.rank_ok || !report.hadamard_rank_ok)
      throw std::runtime_error("gen_scenario: generated directions are not identifiable");
    out.truth.link_ids.resize(spec.n_components);
    for (arma::uword k = 0; k < spec.n_components; ++k) out.truth.link_ids[k] = int(k) + 1;
  } else {
    arma::mat u = sample_orthonormal(rng, spec.p).head_cols(spec.rank);
    for (arma::uword c = 0; c < spec.rank; ++c) {
      arma::vec col = u.col(c);
      sparsify(rng, col, spec.p - 8);
      u.col(c) = col;
    }
    out.truth.u_factor = u;
    out.truth.c_matrix = u * u.t();
  }

  out.train.m = gen_predictors(rng, spec.p, spec.n_train);
  out.test.m = gen_predictors(rng, spec.p, spec.n_test);

  if (spec.kind == ScenarioKind::CorrectlySpecified) {
    const arma::uword k_count = spec.n_components;
    arma::mat raw_train(spec.n_train, k_count), raw_test(spec.n_test, k_count);
    for (arma::uword k = 0; k < k_count; ++k) {
      const arma::vec& gam = out.truth.directions[k].gamma();
      const int id = out.truth.link_ids[k];
      for (arma::uword i = 0; i < spec.n_train; ++i)
        raw_train(i, k) = link_function(id, out.train.m[i].quad_form(gam));
      for (arma::uword i = 0; i < spec.n_test; ++i)
        raw_test(i, k) = link_function(id, out.test.m[i].quad_form(gam));
    }
    // centering constants come from the training sample only
    out.truth.centers = arma::mean(raw_train, 0).t();
    out.truth.train_mean.zeros(spec.n_train);
    out.truth.test_mean.zeros(spec.n_test);
    for (arma::uword k = 0; k < k_count; ++k) {
      out.truth.train_mean += raw_train.col(k) - out.truth.centers(k);
      out.truth.test_mean += raw_test.col(k) - out.truth.centers(k);
    }
  } else {
    const arma::vec v_train = frobenius_with(out.train.m, out.truth.u_factor);
    const arma::vec v_test = frobenius_with(out.test.m, out.truth.u_factor);
    out.truth.train_mean = 2.0 * v_train + 2.0 * arma::square(v_train);
    out.truth.test_mean = 2.0 * v_test + 2.0 * arma::square(v_test);
  }

  const double noise_sd = std::sqrt(spec.sigma2);
  out.train.y.set_size(spec.n_train);
  for (arma::uword i = 0; i < spec.n_train; ++i)
    out.train.y(i) = out.truth.train_mean(i) + noise_sd * rng.normal();
  out.test.y.set_size(spec.n_test);
  for (arma::uword i = 0; i < spec.n_test; ++i)
    out.test.y(i) = out.truth.test_mean(i) + noise_sd * rng.normal();

  return out;
}

}  // namespace ppbr
