#include "cli_common.hpp"

#include <charconv>
#include <stdexcept>

namespace ppbr::cli {

namespace fs = std::filesystem;

void prepare_out_dir(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir))
      throw std::runtime_error(dir.string() + " exists and is not a directory");
    if (!fs::is_empty(dir) && !force)
      throw std::runtime_error(dir.string() +
                               " is not empty; pass --force to overwrite its contents");
  }
  fs::create_directories(dir);
}

void check_out_file(const fs::path& path, bool force) {
  if (fs::exists(path) && !force)
    throw std::runtime_error(path.string() + " exists; pass --force to overwrite");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace ppbr::cli
