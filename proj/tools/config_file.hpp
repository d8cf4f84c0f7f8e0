#pragma once

#include <string>
#include <vector>

#include "ppbr/config.hpp"

namespace ppbr::cli {

// Fit settings parsed from a TOML-style config document:
//
//   [model]    K, J
//   [priors]   prior ("spike_slab" | "uniform"), rho, h0, h1, alpha_w, beta_w,
//              sig_alpha, sig_beta, mu_mean, mu_sd
//   [mcmc]     iterations, warmup, lambda_init, adapt_window,
//              adapt_rate_lo, adapt_rate_hi, adapt_factor
//   [grid]     rho, J, h0  (arrays; each grid point is one chain)
//
// Supported value forms: numbers, double-quoted strings, [comma, lists] of
// numbers, and # comments. Unknown sections or keys are errors, reported with
// their line number.
struct CliConfig {
  FitConfig base;
  std::vector<double> grid_rho;        // empty -> {base.rho}
  std::vector<arma::uword> grid_j;     // empty -> {base.basis_size}
  std::vector<double> grid_h0;         // empty -> {base.prior.h0}; unused for uniform
};

CliConfig parse_config_file(const std::string& path);

}  // namespace ppbr::cli
