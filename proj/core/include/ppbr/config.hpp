#pragma once

#include <armadillo>

#include "ppbr/ssl_prior.hpp"

namespace ppbr {

// Everything a single chain needs besides data and a seed. Defaults follow
// the reference settings: N(0, 3^2) intercept, IG(1, 1) noise variance,
// Beta(1, 1) spike weight, 13000 iterations with 10000 warm-up, initial vMF
// concentration 1e4 adapted in windows of 100 sweeps toward a 20-40%
// acceptance band.
struct FitConfig {
  arma::uword n_components = 1;  // K additive ridge components
  arma::uword basis_size = 4;    // J, natural spline basis incl. the affine part
  double rho = 0.1;              // ridge penalty in the coefficient shrinkage prior
  PriorSpec prior;

  double sig_alpha = 1.0;  // IG prior on sigma^2
  double sig_beta = 1.0;
  double mu_mean = 0.0;  // Gaussian prior on the intercept
  double mu_sd = 3.0;

  arma::uword iterations = 13000;
  arma::uword warmup = 10000;

  double lambda_init = 1e4;
  arma::uword adapt_window = 100;
  double adapt_rate_lo = 0.2;
  double adapt_rate_hi = 0.4;
  double adapt_factor = 1.1;

  void validate() const;
};

}  // namespace ppbr
