#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cli_common.hpp"
#include "commands.hpp"
#include "config_file.hpp"
#include "ppbr/backfitter.hpp"
#include "ppbr/evaluation.hpp"
#include "ppbr/io.hpp"

namespace ppbr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int effective_jobs(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("PPBR_JOBS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

struct GridPoint {
  arma::uword index = 0;
  double rho = 0.0;
  arma::uword basis_size = 2;
  double h0 = 0.0;      // meaningful only under the spike-slab prior
  bool uniform = false;
  FitConfig config;
  std::string dir;      // "gp-000"
};

std::string zero_pad(arma::uword v, int width) {
  std::string s = std::to_string(v);
  while (int(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

int run_fit(const FitArgs& args) {
  const Dataset data = read_dataset_csv(args.data);

  CliConfig cc;
  if (!args.config.empty()) cc = parse_config_file(args.config);

  // flags override the config document
  if (!args.prior.empty()) {
    if (args.prior == "spike_slab") cc.base.prior.kind = PriorKind::SpikeSlab;
    else if (args.prior == "uniform") cc.base.prior.kind = PriorKind::Uniform;
    else throw std::runtime_error("--prior must be 'spike_slab' or 'uniform'");
  }
  if (args.k) cc.base.n_components = *args.k;
  if (args.iterations) cc.base.iterations = *args.iterations;
  if (args.warmup) cc.base.warmup = *args.warmup;
  if (!args.rho.empty()) cc.grid_rho = args.rho;
  if (!args.basis.empty()) cc.grid_j = args.basis;
  if (!args.h0.empty()) cc.grid_h0 = args.h0;

  const bool uniform = cc.base.prior.kind == PriorKind::Uniform;
  if (cc.grid_rho.empty()) cc.grid_rho = {cc.base.rho};
  if (cc.grid_j.empty()) cc.grid_j = {cc.base.basis_size};
  if (cc.grid_h0.empty()) cc.grid_h0 = {cc.base.prior.h0};

  std::vector<GridPoint> grid;
  for (double rho : cc.grid_rho) {
    for (arma::uword j : cc.grid_j) {
      // the spike-scale axis collapses under the uniform prior
      const size_t h0_count = uniform ? 1 : cc.grid_h0.size();
      for (size_t hi = 0; hi < h0_count; ++hi) {
        GridPoint gp;
        gp.index = grid.size();
        gp.rho = rho;
        gp.basis_size = j;
        gp.uniform = uniform;
        gp.h0 = uniform ? 0.0 : cc.grid_h0[hi];
        gp.config = cc.base;
        gp.config.rho = rho;
        gp.config.basis_size = j;
        if (!uniform) gp.config.prior.h0 = gp.h0;
        gp.config.validate();
        gp.dir = "gp-" + zero_pad(gp.index, 3);
        grid.push_back(gp);
      }
    }
  }

  const fs::path out(args.out);
  prepare_out_dir(out, args.force);

  struct Job {
    const GridPoint* gp;
    arma::uword rep;
    fs::path dir;
    std::string stream;
  };
  std::vector<Job> jobs;
  for (const GridPoint& gp : grid)
    for (arma::uword rep = 0; rep < args.reps; ++rep)
      jobs.push_back({&gp, rep, out / gp.dir / ("rep-" + std::to_string(rep)),
                      "fit/gridpoint-" + std::to_string(gp.index) + "/rep-" +
                          std::to_string(rep)});

  // one WAIC per chain; grid points are compared on their mean over reps
  std::vector<double> chain_waic(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        const Job& job = jobs[i];
        const auto start = std::chrono::steady_clock::now();
        const Chain chain = run_chain(data, job.gp->config, Rng(args.seed, job.stream));
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - start;
        ChainInfo info;
        info.seed = args.seed;
        info.elapsed_seconds = elapsed.count();
        info.dataset = args.data;
        write_chain_dir(job.dir, chain, info);
        chain_waic[i] = waic(chain.loglik);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_workers = std::min<int>(effective_jobs(args.jobs), int(jobs.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  json entries = json::array();
  arma::uword best = 0;
  double best_waic = std::numeric_limits<double>::infinity();
  for (const GridPoint& gp : grid) {
    json reps = json::array();
    double total = 0.0;
    for (size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].gp == &gp) {
        reps.push_back({{"dir", gp.dir + "/rep-" + std::to_string(jobs[i].rep)},
                        {"waic", chain_waic[i]}});
        total += chain_waic[i];
      }
    }
    const double mean_waic = total / double(args.reps);
    entries.push_back({{"index", gp.index},
                       {"dir", gp.dir},
                       {"rho", gp.rho},
                       {"basis_size", gp.basis_size},
                       {"h0", gp.uniform ? json(nullptr) : json(gp.h0)},
                       {"prior", gp.uniform ? "uniform" : "spike_slab"},
                       {"waic", mean_waic},
                       {"chains", reps}});
    if (mean_waic < best_waic) {
      best_waic = mean_waic;
      best = gp.index;
    }
  }
  const json selection{{"selected",
                        {{"index", best},
                         {"dir", grid[best].dir},
                         {"chain", grid[best].dir + "/rep-0"},
                         {"waic", best_waic}}},
                       {"grid", entries},
                       {"reps", args.reps},
                       {"seed", args.seed},
                       {"dataset", args.data}};
  atomic_write_text(out / "selection.json", selection.dump(2) + "\n");
  return 0;
}

}  // namespace ppbr::cli
