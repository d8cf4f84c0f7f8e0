#include <fnmatch.h>

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli_common.hpp"
#include "commands.hpp"
#include "ppbr/backfitter.hpp"
#include "ppbr/evaluation.hpp"
#include "ppbr/io.hpp"

namespace ppbr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

arma::vec read_predictions_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("id,y_hat", 0) != 0)
    throw std::runtime_error(path.string() + ": expected an id,y_hat header");
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    vals.push_back(std::stod(line.substr(comma + 1)));
  }
  return arma::vec(vals);
}

std::vector<fs::path> glob_paths(const std::string& pattern) {
  const size_t wild = pattern.find_first_of("*?[");
  fs::path base = ".";
  if (wild != std::string::npos) {
    const size_t slash = pattern.rfind('/', wild);
    if (slash != std::string::npos) base = pattern.substr(0, slash);
  } else if (fs::exists(pattern)) {
    return {pattern};
  }
  std::vector<fs::path> out;
  if (!fs::is_directory(base)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(base)) {
    if (!entry.is_regular_file()) continue;
    // iterating from "." yields "./x/y" entries; strip that before matching
    const std::string candidate = entry.path().lexically_normal().string();
    if (::fnmatch(pattern.c_str(), candidate.c_str(), FNM_PATHNAME) == 0)
      out.push_back(candidate);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int run_aggregate(const EvaluateArgs& args) {
  const auto files = glob_paths(args.glob);
  if (files.empty())
    throw std::runtime_error("no files match --glob pattern '" + args.glob + "'");
  check_out_file(args.out, args.force);

  double mspe_total = 0.0, waic_total = 0.0;
  json cover_sum;  // entry list of the first run with coverage, accumulated
  arma::uword with_coverage = 0;
  for (const fs::path& f : files) {
    std::ifstream in(f);
    json j;
    in >> j;
    mspe_total += j.at("mspe").get<double>();
    waic_total += j.at("waic").get<double>();
    const json& cov = j.at("coverage");
    if (cov.is_null()) continue;
    if (with_coverage == 0) {
      cover_sum = cov;
    } else {
      if (cover_sum.size() != cov.size())
        throw std::runtime_error(f.string() + ": coverage shape differs across runs");
      for (size_t e = 0; e < cov.size(); ++e) {
        if (cover_sum[e].at("component") != cov[e].at("component") ||
            cover_sum[e].at("coordinate") != cov[e].at("coordinate"))
          throw std::runtime_error(f.string() + ": coverage entries differ across runs");
        cover_sum[e]["cover"] = cover_sum[e].at("cover").get<double>() +
                                cov[e].at("cover").get<double>();
        cover_sum[e]["length"] = cover_sum[e].at("length").get<double>() +
                                 cov[e].at("length").get<double>();
      }
    }
    ++with_coverage;
  }

  json coverage = json(nullptr);
  if (with_coverage > 0) {
    coverage = json::array();
    for (const json& e : cover_sum)
      coverage.push_back({{"component", e.at("component")},
                          {"coordinate", e.at("coordinate")},
                          {"cover_mean", e.at("cover").get<double>() / with_coverage},
                          {"length_mean", e.at("length").get<double>() / with_coverage}});
  }
  const json out{{"runs", files.size()},
                 {"runs_with_coverage", with_coverage},
                 {"mspe_mean", mspe_total / double(files.size())},
                 {"waic_mean", waic_total / double(files.size())},
                 {"coverage", coverage}};
  atomic_write_text(args.out, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int run_evaluate(const EvaluateArgs& args) {
  if (!args.glob.empty()) return run_aggregate(args);

  const LoadedChain lc = read_chain_dir(args.chain);
  const Chain& chain = lc.chain;
  const Dataset data = read_dataset_csv(args.data);
  const fs::path out(args.out);
  prepare_out_dir(out, args.force);

  const arma::vec yhat =
      args.pred.empty() ? predict_mean(chain, data.m) : read_predictions_csv(args.pred);
  const double mspe_value = mspe(yhat, data.y);
  const double waic_value = waic(chain.loglik);

  GroundTruth truth;
  bool have_directions = false;
  if (!args.truth.empty()) {
    truth = read_truth_json(args.truth);
    have_directions = !truth.directions.empty();
  }
  std::string mode = args.align;
  if (mode.empty()) mode = have_directions ? "truth" : "by-monotonicity";
  if (mode != "truth" && mode != "by-monotonicity")
    throw std::runtime_error("--align must be 'truth' or 'by-monotonicity'");
  if (mode == "truth" && !have_directions)
    throw std::runtime_error("--align truth needs a truth file with projection directions");

  json metrics{{"mspe", mspe_value},
               {"waic", waic_value},
               {"alignment", mode},
               {"n_components", chain.config.n_components},
               {"draws", chain.draws.size()},
               {"acs", nullptr},
               {"coverage", nullptr}};

  arma::umat assignment;
  arma::mat ranges;
  const arma::uword k_count = chain.draws.empty() ? 0 : chain.draws.front().comps.size();
  if (mode == "truth") {
    const AlignmentMap map = align(chain, truth.directions);
    assignment = assignment_matrix(map, chain.draws.size());
    ranges = truth_index_ranges(truth.directions, data);

    const arma::mat acs_mat = acs_samples(chain, map, truth.directions);
    json acs_json{{"mean", json::array()}, {"samples", json::array()}};
    for (arma::uword k = 0; k < acs_mat.n_cols; ++k)
      acs_json["mean"].push_back(arma::mean(acs_mat.col(k)));
    for (arma::uword t = 0; t < acs_mat.n_rows; ++t) {
      json row = json::array();
      for (arma::uword k = 0; k < acs_mat.n_cols; ++k) row.push_back(acs_mat(t, k));
      acs_json["samples"].push_back(std::move(row));
    }
    metrics["acs"] = std::move(acs_json);

    json cov = json::array();  // 1-based labels, matching the m_i_j dataset columns
    for (const CoverageEntry& e : coverage_report(chain, map, truth.directions)) {
      cov.push_back({{"component", e.component + 1},
                     {"coordinate", e.coordinate + 1},
                     {"truth", e.truth},
                     {"lo", e.lo},
                     {"hi", e.hi},
                     {"cover", e.cover},
                     {"length", e.length}});
    }
    metrics["coverage"] = std::move(cov);
  } else if (k_count > 0) {
    assignment = monotonicity_order(chain, data);
    ranges = posterior_index_ranges(chain, assignment, data);
  }

  std::string csv = "component,u,median,lo,hi\n";
  if (assignment.n_cols > 0) {
    const RidgeSummary rs = ridge_summary(chain, assignment, ranges);
    for (arma::uword k = 0; k < rs.grid.n_cols; ++k)
      for (arma::uword g = 0; g < rs.grid.n_rows; ++g)
        csv += std::to_string(k + 1) + "," + fmt_double(rs.grid(g, k)) + "," +
               fmt_double(rs.median(g, k)) + "," + fmt_double(rs.lo(g, k)) + "," +
               fmt_double(rs.hi(g, k)) + "\n";
  }
  atomic_write_text(out / "ridge_summary.csv", csv);
  atomic_write_text(out / "metrics.json", metrics.dump(2) + "\n");
  return 0;
}

}  // namespace ppbr::cli
