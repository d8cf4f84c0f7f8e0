#include <benchmark/benchmark.h>

#include <armadillo>
#include <memory>

#include "ppbr/backfitter.hpp"
#include "ppbr/config.hpp"
#include "ppbr/rng.hpp"
#include "ppbr/simulation.hpp"
#include "ppbr/types.hpp"

namespace {

using namespace ppbr;

ScenarioData scenario(arma::uword p, arma::uword n_train) {
  ScenarioSpec spec;
  spec.p = p;
  spec.n_components = 2;
  spec.n_train = n_train;
  spec.n_test = 1;
  spec.seed = 2024;
  return gen_scenario(spec);
}

void bm_frobenius_index(benchmark::State& state) {
  const arma::uword p = state.range(0);
  const ScenarioData sc = scenario(p, 400);
  const Direction& gamma = sc.truth.directions[0];
  arma::uword i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(frobenius_index(sc.train.m[i], gamma));
    i = (i + 1) % sc.train.m.size();
  }
}
BENCHMARK(bm_frobenius_index)->Arg(6)->Arg(15)->Arg(30);

void bm_sampler_step(benchmark::State& state) {
  const arma::uword p = state.range(0);
  auto data = std::make_shared<Dataset>(scenario(p, 400).train);
  FitConfig cfg;
  cfg.n_components = 2;
  cfg.iterations = 2;
  cfg.warmup = 1;
  Sampler sampler(data, cfg, Rng(7, "bench"));
  for (auto _ : state) {
    sampler.step();
    benchmark::DoNotOptimize(&sampler.state());
  }
}
BENCHMARK(bm_sampler_step)->Arg(6)->Arg(15)->Unit(benchmark::kMicrosecond);

void bm_run_chain(benchmark::State& state) {
  const ScenarioData sc = scenario(10, 200);
  FitConfig cfg;
  cfg.n_components = 2;
  cfg.iterations = 200;
  cfg.warmup = 100;
  for (auto _ : state) {
    Chain chain = run_chain(sc.train, cfg, Rng(11, "bench"));
    benchmark::DoNotOptimize(chain.loglik.memptr());
  }
}
BENCHMARK(bm_run_chain)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
