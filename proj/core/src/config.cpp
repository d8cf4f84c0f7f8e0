#include "ppbr/config.hpp"

#include <stdexcept>

namespace ppbr {

void FitConfig::validate() const {
  if (n_components < 1) throw std::invalid_argument("config: need at least one component");
  if (basis_size < 2) throw std::invalid_argument("config: basis size must be >= 2");
  if (!(rho >= 0.0)) throw std::invalid_argument("config: rho must be >= 0");
  if (!(sig_alpha > 0.0) || !(sig_beta > 0.0))
    throw std::invalid_argument("config: IG hyperparameters must be positive");
  if (!(mu_sd > 0.0)) throw std::invalid_argument("config: intercept prior sd must be positive");
  if (iterations < 1 || warmup >= iterations)
    throw std::invalid_argument("config: need warmup < iterations");
  if (!(lambda_init > 0.0)) throw std::invalid_argument("config: lambda_init must be positive");
  if (adapt_window < 1) throw std::invalid_argument("config: adaptation window must be >= 1");
  if (!(adapt_rate_lo >= 0.0) || !(adapt_rate_lo < adapt_rate_hi) || !(adapt_rate_hi <= 1.0))
    throw std::invalid_argument("config: need 0 <= lo < hi <= 1 for the acceptance band");
  if (!(adapt_factor > 1.0)) throw std::invalid_argument("config: adapt factor must exceed 1");
  prior.validate();
}

}  // namespace ppbr
