#pragma once

#include <armadillo>
#include <cstdint>
#include <vector>

#include "ppbr/rng.hpp"
#include "ppbr/types.hpp"

namespace ppbr {

enum class ScenarioKind { CorrectlySpecified, Misspecified };

// Synthetic-benchmark recipe. CorrectlySpecified draws K sparse projection
// directions (4 nonzero entries each) and responds through the first K of the
// reference link functions; Misspecified responds through a quadratic in the
// full Frobenius inner product with a rank-r coefficient matrix (8 nonzero
// entries per factor column), which lies outside the additive-index family
// whenever r > 1.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::CorrectlySpecified;
  arma::uword p = 15;
  arma::uword n_components = 2;  // K, CorrectlySpecified only (at most 4 links defined)
  arma::uword rank = 2;          // r, Misspecified only
  arma::uword n_train = 400;
  arma::uword n_test = 1000;
  double sigma2 = 1.0;  // 0 is allowed as the noiseless testing override
  std::uint64_t seed = 0;

  void validate() const;
};

// Everything needed to recompute the noiseless signal exactly and to score a
// fit against the generating process.
struct GroundTruth {
  ScenarioKind kind = ScenarioKind::CorrectlySpecified;
  double mu = 0.0;
  double sigma2 = 1.0;

  // CorrectlySpecified
  std::vector<Direction> directions;
  std::vector<int> link_ids;  // into link_function, 1-based
  arma::vec centers;          // training means of the raw links, subtracted per component

  // Misspecified
  arma::mat u_factor;  // sparsified p x r factor, C = U U'
  arma::mat c_matrix;

  arma::vec train_mean;  // noiseless E[Y] per training subject
  arma::vec test_mean;
};

struct ScenarioData {
  Dataset train;
  Dataset test;
  GroundTruth truth;
};

// Haar-distributed p x p orthonormal matrix: QR of an iid Gaussian matrix
// with the R diagonal's signs folded into Q.
arma::mat sample_orthonormal(Rng& rng, arma::uword p);

// M = A Diag(e) A' with Haar eigenvectors and eigenvalues iid U(-10, 10).
std::vector<SymMatrix> gen_predictors(Rng& rng, arma::uword p, arma::uword n);

// gamma_k = normalized V q_k with p - 4 random entries zeroed first; V is one
// shared Haar rotation, q_k has iid U(0, 1) entries.
std::vector<Direction> gen_directions(Rng& rng, arma::uword p, arma::uword k);

// Raw reference links, before the per-dataset centering constant:
//   1: -u    2: -u^2/4    3: 2 exp(-u/5)    4: u^2/4
double link_function(int which, double u);

ScenarioData gen_scenario(const ScenarioSpec& spec);

}  // namespace ppbr
