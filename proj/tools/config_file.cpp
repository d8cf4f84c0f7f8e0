#include "config_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ppbr::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Cursor {
  std::string path;
  int line = 0;
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error(path + " line " + std::to_string(line) + ": " + msg);
  }
};

double number(std::string_view v, const Cursor& at) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    at.fail("expected a number, got '" + std::string(v) + "'");
  return out;
}

arma::uword count(std::string_view v, const Cursor& at) {
  const double d = number(v, at);
  if (d < 0 || d != std::floor(d)) at.fail("expected a nonnegative integer");
  return arma::uword(d);
}

std::string quoted(std::string_view v, const Cursor& at) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"')
    at.fail("expected a quoted string");
  return std::string(v.substr(1, v.size() - 2));
}

std::vector<double> number_array(std::string_view v, const Cursor& at) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    at.fail("expected an array like [0, 0.1, 0.2]");
  v = v.substr(1, v.size() - 2);
  std::vector<double> out;
  while (true) {
    const size_t comma = v.find(',');
    const std::string_view item = trim(v.substr(0, comma));
    if (item.empty()) at.fail("empty array element");
    out.push_back(number(item, at));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

CliConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);

  CliConfig cfg;
  Cursor at{path, 0};
  std::string section;
  std::string raw;
  while (std::getline(in, raw)) {
    ++at.line;
    std::string_view line = raw;
    // comments start at an unquoted '#'
    bool in_quotes = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quotes = !in_quotes;
      if (line[i] == '#' && !in_quotes) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') at.fail("unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "model" && section != "priors" && section != "mcmc" && section != "grid")
        at.fail("unknown section [" + section + "]");
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) at.fail("expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) at.fail("expected key = value");
    if (section.empty()) at.fail("key '" + key + "' appears before any [section]");

    FitConfig& b = cfg.base;
    if (section == "model") {
      if (key == "K") b.n_components = count(value, at);
      else if (key == "J") b.basis_size = count(value, at);
      else at.fail("unknown key '" + key + "' in [model]");
    } else if (section == "priors") {
      if (key == "prior") {
        const std::string kind = quoted(value, at);
        if (kind == "spike_slab") b.prior.kind = PriorKind::SpikeSlab;
        else if (kind == "uniform") b.prior.kind = PriorKind::Uniform;
        else at.fail("prior must be \"spike_slab\" or \"uniform\"");
      } else if (key == "rho") b.rho = number(value, at);
      else if (key == "h0") b.prior.h0 = number(value, at);
      else if (key == "h1") b.prior.h1 = number(value, at);
      else if (key == "alpha_w") b.prior.alpha_w = number(value, at);
      else if (key == "beta_w") b.prior.beta_w = number(value, at);
      else if (key == "sig_alpha") b.sig_alpha = number(value, at);
      else if (key == "sig_beta") b.sig_beta = number(value, at);
      else if (key == "mu_mean") b.mu_mean = number(value, at);
      else if (key == "mu_sd") b.mu_sd = number(value, at);
      else at.fail("unknown key '" + key + "' in [priors]");
    } else if (section == "mcmc") {
      if (key == "iterations") b.iterations = count(value, at);
      else if (key == "warmup") b.warmup = count(value, at);
      else if (key == "lambda_init") b.lambda_init = number(value, at);
      else if (key == "adapt_window") b.adapt_window = count(value, at);
      else if (key == "adapt_rate_lo") b.adapt_rate_lo = number(value, at);
      else if (key == "adapt_rate_hi") b.adapt_rate_hi = number(value, at);
      else if (key == "adapt_factor") b.adapt_factor = number(value, at);
      else at.fail("unknown key '" + key + "' in [mcmc]");
    } else {  // grid
      if (key == "rho") cfg.grid_rho = number_array(value, at);
      else if (key == "J") {
        cfg.grid_j.clear();
        for (double v : number_array(value, at)) {
          if (v < 2 || v != std::floor(v)) at.fail("J grid entries must be integers >= 2");
          cfg.grid_j.push_back(arma::uword(v));
        }
      } else if (key == "h0") cfg.grid_h0 = number_array(value, at);
      else at.fail("unknown key '" + key + "' in [grid]");
    }
  }
  return cfg;
}

}  // namespace ppbr::cli
