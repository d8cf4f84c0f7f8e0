#include <stdexcept>

#include "cli_common.hpp"
#include "commands.hpp"
#include "ppbr/io.hpp"
#include "ppbr/simulation.hpp"

namespace ppbr::cli {

namespace fs = std::filesystem;

int run_simulate(const SimulateArgs& args) {
  ScenarioSpec spec;
  if (args.scenario == "correct")
    spec.kind = ScenarioKind::CorrectlySpecified;
  else if (args.scenario == "misspec")
    spec.kind = ScenarioKind::Misspecified;
  else
    throw std::runtime_error("--scenario must be 'correct' or 'misspec'");
  spec.p = args.p;
  spec.n_components = args.k;
  spec.rank = args.r;
  spec.n_train = args.n_train;
  spec.n_test = args.n_test;
  spec.sigma2 = args.sigma2;
  spec.seed = args.seed;
  spec.validate();

  const fs::path out(args.out);
  prepare_out_dir(out, args.force);

  const ScenarioData sc = gen_scenario(spec);
  write_dataset_csv(out / "train.csv", sc.train);
  write_dataset_csv(out / "test.csv", sc.test);
  write_truth_json(out / "truth.json", sc.truth);
  write_scenario_spec_json(out / "spec.json", spec);
  return 0;
}

}  // namespace ppbr::cli
