#include <stdexcept>
#include <string>

#include "cli_common.hpp"
#include "commands.hpp"
#include "ppbr/backfitter.hpp"
#include "ppbr/io.hpp"

namespace ppbr::cli {

namespace fs = std::filesystem;

int run_predict(const PredictArgs& args) {
  const LoadedChain lc = read_chain_dir(args.chain);
  const Dataset data = read_dataset_csv(args.data);
  if (!lc.chain.draws.front().comps.empty()) {
    const arma::uword chain_p = lc.chain.draws.front().comps.front().direction.p();
    if (chain_p != data.p())
      throw std::runtime_error("chain was fit on p=" + std::to_string(chain_p) +
                               " but the data has p=" + std::to_string(data.p()));
  }

  check_out_file(args.out, args.force);
  const arma::vec yhat = predict_mean(lc.chain, data.m);
  std::string csv = "id,y_hat\n";
  for (arma::uword i = 0; i < yhat.n_elem; ++i)
    csv += std::to_string(i + 1) + "," + fmt_double(yhat(i)) + "\n";
  atomic_write_text(args.out, csv);

  if (!args.per_draw.empty()) {
    check_out_file(args.per_draw, args.force);
    const arma::mat draws = predict_draws(lc.chain, data.m);  // n x draws
    std::string header = "y_1";
    for (arma::uword i = 2; i <= draws.n_rows; ++i) header += ",y_" + std::to_string(i);
    std::string body = header + "\n";
    for (arma::uword t = 0; t < draws.n_cols; ++t) {
      body += fmt_double(draws(0, t));
      for (arma::uword i = 1; i < draws.n_rows; ++i) {
        body += ',';
        body += fmt_double(draws(i, t));
      }
      body += '\n';
    }
    atomic_write_text(args.per_draw, body);
  }
  return 0;
}

}  // namespace ppbr::cli
