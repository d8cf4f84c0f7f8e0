#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <armadillo>

namespace ppbr::cli {

struct SimulateArgs {
  std::string scenario;  // "correct" | "misspec"
  arma::uword p = 0;
  arma::uword k = 2;
  arma::uword r = 2;
  arma::uword n_train = 400;
  arma::uword n_test = 1000;
  double sigma2 = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  bool force = false;
};

struct FitArgs {
  std::string data;
  std::string out;
  std::string config;  // optional TOML-style file
  std::uint64_t seed = 0;
  int jobs = 0;  // 0 -> PPBR_JOBS env var, then 1
  arma::uword reps = 1;
  bool force = false;

  // flag overrides; unset values defer to the config file / defaults
  std::vector<double> rho;
  std::vector<arma::uword> basis;
  std::vector<double> h0;
  std::string prior;  // "", "spike_slab", "uniform"
  std::optional<arma::uword> k;
  std::optional<arma::uword> iterations;
  std::optional<arma::uword> warmup;
};

struct PredictArgs {
  std::string chain;
  std::string data;
  std::string out;       // predictions.csv
  std::string per_draw;  // optional draws x n matrix CSV
  bool force = false;
};

struct EvaluateArgs {
  std::string chain;
  std::string data;
  std::string truth;  // optional truth.json
  std::string pred;   // optional precomputed predictions.csv
  std::string align = "";  // "truth" | "by-monotonicity"; default by availability
  std::string out;
  std::string glob;  // aggregator mode: pattern over metrics.json files
  bool force = false;
};

int run_simulate(const SimulateArgs& args);
int run_fit(const FitArgs& args);
int run_predict(const PredictArgs& args);
int run_evaluate(const EvaluateArgs& args);

}  // namespace ppbr::cli
