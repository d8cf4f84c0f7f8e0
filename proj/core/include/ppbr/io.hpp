#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ppbr/backfitter.hpp"
#include "ppbr/config.hpp"
#include "ppbr/simulation.hpp"
#include "ppbr/types.hpp"

namespace ppbr {

// All writers below go through a temp-file-then-rename sequence so a crash
// mid-write never leaves a truncated artifact behind. Doubles are printed in
// shortest-round-trip form: parsing reproduces the stored bits exactly, and a
// given value always prints the same bytes, which is what makes re-runs
// byte-comparable.
void atomic_write_text(const std::filesystem::path& path, const std::string& text);
void atomic_write_bytes(const std::filesystem::path& path, const void* bytes,
                        std::size_t count);

// One row per subject: response first, then the packed upper triangle of the
// predictor, row-major. Header is exactly  y,m_1_1,m_1_2,...,m_p_p.
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset_csv(const std::filesystem::path& path);

// Sidecar manifest: {"p": ..., "n": ..., "provenance": "..."}.
void write_dataset_manifest(const std::filesystem::path& path, const Dataset& data,
                            const std::string& provenance);

void write_scenario_spec_json(const std::filesystem::path& path, const ScenarioSpec& spec);
ScenarioSpec read_scenario_spec_json(const std::filesystem::path& path);

void write_truth_json(const std::filesystem::path& path, const GroundTruth& truth);
GroundTruth read_truth_json(const std::filesystem::path& path);

// Provenance for a persisted chain. elapsed_seconds is informational only and
// is the one field re-runs are allowed to differ in.
struct ChainInfo {
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;
  std::string dataset;  // path or label of the training data
};

// Chain directory layout:
//   meta.json   config, seed, dimensions, acceptance rates, timings
//   draws.csv   one row per draw: mu, sigma2, then per component
//               w, theta_1..theta_{p-1}, gamma_1..gamma_p,
//               knot_1..knot_J (boundary, interior..., boundary),
//               c_1..c_J, center_offset
//   loglik.bin  row-major little-endian float64, n x draws
void write_chain_dir(const std::filesystem::path& dir, const Chain& chain,
                     const ChainInfo& info);

struct LoadedChain {
  Chain chain;
  ChainInfo info;
};
LoadedChain read_chain_dir(const std::filesystem::path& dir);

}  // namespace ppbr
