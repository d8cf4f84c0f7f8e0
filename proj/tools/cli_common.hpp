#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace ppbr::cli {

// Refuses to clobber existing non-empty output directories unless forced,
// then makes sure the directory exists.
void prepare_out_dir(const std::filesystem::path& dir, bool force);

// Same contract for single output files.
void check_out_file(const std::filesystem::path& path, bool force);

// Shortest-round-trip decimal form (shared by every CSV the CLI writes).
std::string fmt_double(double v);

}  // namespace ppbr::cli
