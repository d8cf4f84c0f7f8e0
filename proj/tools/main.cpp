#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"

namespace {

// Single-line JSON on stderr so scripted callers can parse failures.
int fail(const std::string& command, const std::string& what) {
  std::cerr << nlohmann::json{{"command", command}, {"error", what}}.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ppbr::cli;

  CLI::App app{"projection-pursuit Bayesian regression for symmetric matrix predictors"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "generate a synthetic train/test scenario");
  c_sim->add_option("--scenario", sim.scenario, "correct | misspec")->required();
  c_sim->add_option("--p", sim.p, "matrix dimension")->required();
  c_sim->add_option("--K", sim.k, "number of additive components (correct scenario)");
  c_sim->add_option("--rank", sim.r, "rank of the quadratic index (misspec scenario)");
  c_sim->add_option("--n-train", sim.n_train, "training subjects");
  c_sim->add_option("--n-test", sim.n_test, "test subjects");
  c_sim->add_option("--sigma2", sim.sigma2, "noise variance (0 for noiseless)");
  c_sim->add_option("--seed", sim.seed, "root RNG seed");
  c_sim->add_option("--out", sim.out, "output directory")->required();
  c_sim->add_flag("--force", sim.force, "overwrite an existing non-empty output directory");

  FitArgs fit;
  CLI::App* c_fit = app.add_subcommand("fit", "run MCMC chains over a settings grid");
  c_fit->add_option("--data", fit.data, "training dataset CSV")->required();
  c_fit->add_option("--out", fit.out, "output directory")->required();
  c_fit->add_option("--config", fit.config, "TOML-style settings file");
  c_fit->add_option("--seed", fit.seed, "root RNG seed");
  c_fit->add_option("--jobs", fit.jobs, "concurrent chains (default: PPBR_JOBS env, then 1)");
  c_fit->add_option("--reps", fit.reps, "independent chains per grid point");
  c_fit->add_option("--rho", fit.rho, "ridge penalty grid")->delimiter(',');
  c_fit->add_option("--J", fit.basis, "spline basis size grid")->delimiter(',');
  c_fit->add_option("--h0", fit.h0, "spike scale grid (spike-slab prior only)")->delimiter(',');
  c_fit->add_option("--prior", fit.prior, "spike_slab | uniform");
  c_fit->add_option("--K", fit.k, "number of additive components");
  c_fit->add_option("--iterations", fit.iterations, "total MCMC sweeps");
  c_fit->add_option("--warmup", fit.warmup, "discarded initial sweeps");
  c_fit->add_flag("--force", fit.force, "overwrite an existing non-empty output directory");

  PredictArgs pred;
  CLI::App* c_pred = app.add_subcommand("predict", "posterior mean predictions from a chain");
  c_pred->add_option("--chain", pred.chain, "chain directory from fit")->required();
  c_pred->add_option("--data", pred.data, "dataset CSV to predict on")->required();
  c_pred->add_option("--out", pred.out, "predictions CSV path")->required();
  c_pred->add_option("--per-draw", pred.per_draw, "also write a draws x n prediction matrix CSV");
  c_pred->add_flag("--force", pred.force, "overwrite existing output files");

  EvaluateArgs ev;
  CLI::App* c_ev = app.add_subcommand("evaluate", "held-out metrics and posterior summaries");
  c_ev->add_option("--chain", ev.chain, "chain directory from fit");
  c_ev->add_option("--data", ev.data, "held-out dataset CSV");
  c_ev->add_option("--truth", ev.truth, "simulation truth JSON (enables direction metrics)");
  c_ev->add_option("--pred", ev.pred, "precomputed predictions CSV (default: posterior mean)");
  c_ev->add_option("--align", ev.align, "truth | by-monotonicity (default by availability)");
  c_ev->add_option("--out", ev.out, "output directory, or output JSON path with --glob");
  c_ev->add_option("--glob", ev.glob, "aggregate existing metrics.json files matching a pattern");
  c_ev->add_flag("--force", ev.force, "overwrite existing outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("args", e.what());
  }

  std::string verb = "args";
  try {
    if (c_sim->parsed()) {
      verb = "simulate";
      return run_simulate(sim);
    }
    if (c_fit->parsed()) {
      verb = "fit";
      return run_fit(fit);
    }
    if (c_pred->parsed()) {
      verb = "predict";
      return run_predict(pred);
    }
    verb = "evaluate";
    if (ev.glob.empty()) {
      if (ev.chain.empty() || ev.data.empty())
        throw std::runtime_error("--chain and --data are required without --glob");
    }
    if (ev.out.empty()) throw std::runtime_error("--out is required");
    return run_evaluate(ev);
  } catch (const std::exception& e) {
    return fail(verb, e.what());
  }
}
