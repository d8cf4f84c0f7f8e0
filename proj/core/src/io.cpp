#include "ppbr/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <vector>

#include "json.hpp"

static_assert(std::endian::native == std::endian::little,
              "loglik.bin is defined as little-endian");

namespace ppbr {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Shortest decimal form that parses back to the same bits.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::runtime_error(where + ": cannot parse number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// getline that tolerates CRLF input
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::string dataset_header(arma::uword p) {
  std::string h = "y";
  for (arma::uword j = 1; j <= p; ++j)
    for (arma::uword k = j; k <= p; ++k)
      h += ",m_" + std::to_string(j) + "_" + std::to_string(k);
  return h;
}

json config_to_json(const FitConfig& c) {
  return json{
      {"n_components", c.n_components},
      {"basis_size", c.basis_size},
      {"rho", c.rho},
      {"prior",
       {{"kind", c.prior.kind == PriorKind::SpikeSlab ? "spike_slab" : "uniform"},
        {"h0", c.prior.h0},
        {"h1", c.prior.h1},
        {"alpha_w", c.prior.alpha_w},
        {"beta_w", c.prior.beta_w}}},
      {"sig_alpha", c.sig_alpha},
      {"sig_beta", c.sig_beta},
      {"mu_mean", c.mu_mean},
      {"mu_sd", c.mu_sd},
      {"iterations", c.iterations},
      {"warmup", c.warmup},
      {"lambda_init", c.lambda_init},
      {"adapt_window", c.adapt_window},
      {"adapt_rate_lo", c.adapt_rate_lo},
      {"adapt_rate_hi", c.adapt_rate_hi},
      {"adapt_factor", c.adapt_factor}};
}

FitConfig config_from_json(const json& j) {
  FitConfig c;
  c.n_components = j.at("n_components").get<arma::uword>();
  c.basis_size = j.at("basis_size").get<arma::uword>();
  c.rho = j.at("rho").get<double>();
  const json& pr = j.at("prior");
  const std::string kind = pr.at("kind").get<std::string>();
  if (kind == "spike_slab")
    c.prior.kind = PriorKind::SpikeSlab;
  else if (kind == "uniform")
    c.prior.kind = PriorKind::Uniform;
  else
    throw std::runtime_error("config: unknown prior kind '" + kind + "'");
  c.prior.h0 = pr.at("h0").get<double>();
  c.prior.h1 = pr.at("h1").get<double>();
  c.prior.alpha_w = pr.at("alpha_w").get<double>();
  c.prior.beta_w = pr.at("beta_w").get<double>();
  c.sig_alpha = j.at("sig_alpha").get<double>();
  c.sig_beta = j.at("sig_beta").get<double>();
  c.mu_mean = j.at("mu_mean").get<double>();
  c.mu_sd = j.at("mu_sd").get<double>();
  c.iterations = j.at("iterations").get<arma::uword>();
  c.warmup = j.at("warmup").get<arma::uword>();
  c.lambda_init = j.at("lambda_init").get<double>();
  c.adapt_window = j.at("adapt_window").get<arma::uword>();
  c.adapt_rate_lo = j.at("adapt_rate_lo").get<double>();
  c.adapt_rate_hi = j.at("adapt_rate_hi").get<double>();
  c.adapt_factor = j.at("adapt_factor").get<double>();
  return c;
}

json vec_to_json(const arma::vec& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

arma::vec vec_from_json(const json& a) {
  arma::vec v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v(i) = a[i].get<double>();
  return v;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return j;
}

}  // namespace

void atomic_write_text(const fs::path& path, const std::string& text) {
  atomic_write_bytes(path, text.data(), text.size());
}

void atomic_write_bytes(const fs::path& path, const void* bytes, std::size_t count) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(static_cast<const char*>(bytes), std::streamsize(count));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
}

void write_dataset_csv(const fs::path& path, const Dataset& data) {
  data.validate();
  std::string out = dataset_header(data.p());
  out += '\n';
  for (arma::uword i = 0; i < data.n(); ++i) {
    out += fmt(data.y(i));
    for (double v : data.m[i].packed()) {
      out += ',';
      out += fmt(v);
    }
    out += '\n';
  }
  atomic_write_text(path, out);
}

Dataset read_dataset_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!next_line(in, line)) throw std::runtime_error(path.string() + ": empty file");

  const auto head = split_csv(line);
  const arma::uword q = head.size() - 1;
  arma::uword p = 0;
  while (p * (p + 1) / 2 < q) ++p;
  if (p < 2 || p * (p + 1) / 2 != q || dataset_header(p) != line)
    throw std::runtime_error(path.string() + ": header is not y,m_1_1,...,m_p_p");

  Dataset data;
  std::vector<double> ys;
  arma::uword row = 1;
  while (next_line(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    const std::string where = path.string() + " line " + std::to_string(row);
    if (fields.size() != q + 1)
      throw std::runtime_error(where + ": expected " + std::to_string(q + 1) + " fields, got " +
                               std::to_string(fields.size()));
    ys.push_back(parse_double(fields[0], where));
    arma::vec packed(q);
    for (arma::uword c = 0; c < q; ++c) {
      packed(c) = parse_double(fields[c + 1], where);
      if (!std::isfinite(packed(c)))
        throw std::runtime_error(where + ": non-finite matrix entry");
    }
    data.m.push_back(SymMatrix::from_packed(p, std::move(packed)));
  }
  data.y = arma::vec(ys);
  data.validate();
  return data;
}

void write_dataset_manifest(const fs::path& path, const Dataset& data,
                            const std::string& provenance) {
  const json j{{"p", data.p()}, {"n", data.n()}, {"provenance", provenance}};
  atomic_write_text(path, j.dump(2) + "\n");
}

void write_scenario_spec_json(const fs::path& path, const ScenarioSpec& spec) {
  const json j{
      {"kind", spec.kind == ScenarioKind::CorrectlySpecified ? "correct" : "misspec"},
      {"p", spec.p},
      {"n_components", spec.n_components},
      {"rank", spec.rank},
      {"n_train", spec.n_train},
      {"n_test", spec.n_test},
      {"sigma2", spec.sigma2},
      {"seed", spec.seed}};
  atomic_write_text(path, j.dump(2) + "\n");
}

ScenarioSpec read_scenario_spec_json(const fs::path& path) {
  const json j = read_json_file(path);
  ScenarioSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "correct")
    spec.kind = ScenarioKind::CorrectlySpecified;
  else if (kind == "misspec")
    spec.kind = ScenarioKind::Misspecified;
  else
    throw std::runtime_error(path.string() + ": unknown scenario kind '" + kind + "'");
  spec.p = j.at("p").get<arma::uword>();
  spec.n_components = j.at("n_components").get<arma::uword>();
  spec.rank = j.at("rank").get<arma::uword>();
  spec.n_train = j.at("n_train").get<arma::uword>();
  spec.n_test = j.at("n_test").get<arma::uword>();
  spec.sigma2 = j.at("sigma2").get<double>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  return spec;
}

void write_truth_json(const fs::path& path, const GroundTruth& truth) {
  json j{{"kind", truth.kind == ScenarioKind::CorrectlySpecified ? "correct" : "misspec"},
         {"mu", truth.mu},
         {"sigma2", truth.sigma2},
         {"train_mean", vec_to_json(truth.train_mean)},
         {"test_mean", vec_to_json(truth.test_mean)}};
  if (truth.kind == ScenarioKind::CorrectlySpecified) {
    json dirs = json::array();
    for (const Direction& d : truth.directions)
      dirs.push_back({{"gamma", vec_to_json(d.gamma())}, {"theta", vec_to_json(d.theta())}});
    j["directions"] = std::move(dirs);
    j["link_ids"] = truth.link_ids;
    j["centers"] = vec_to_json(truth.centers);
  } else {
    json cols = json::array();
    for (arma::uword c = 0; c < truth.u_factor.n_cols; ++c)
      cols.push_back(vec_to_json(truth.u_factor.col(c)));
    j["u_factor_cols"] = std::move(cols);
  }
  atomic_write_text(path, j.dump(2) + "\n");
}

GroundTruth read_truth_json(const fs::path& path) {
  const json j = read_json_file(path);
  GroundTruth truth;
  const std::string kind = j.at("kind").get<std::string>();
  truth.kind = kind == "correct" ? ScenarioKind::CorrectlySpecified : ScenarioKind::Misspecified;
  truth.mu = j.at("mu").get<double>();
  truth.sigma2 = j.at("sigma2").get<double>();
  truth.train_mean = vec_from_json(j.at("train_mean"));
  truth.test_mean = vec_from_json(j.at("test_mean"));
  if (truth.kind == ScenarioKind::CorrectlySpecified) {
    for (const json& d : j.at("directions"))
      truth.directions.push_back(
          Direction::from_parts(vec_from_json(d.at("gamma")), vec_from_json(d.at("theta"))));
    truth.link_ids = j.at("link_ids").get<std::vector<int>>();
    truth.centers = vec_from_json(j.at("centers"));
  } else {
    const json& cols = j.at("u_factor_cols");
    if (cols.empty()) throw std::runtime_error(path.string() + ": empty factor");
    truth.u_factor.set_size(cols[0].size(), cols.size());
    for (size_t c = 0; c < cols.size(); ++c) truth.u_factor.col(c) = vec_from_json(cols[c]);
    truth.c_matrix = truth.u_factor * truth.u_factor.t();
  }
  return truth;
}

namespace {

std::string draws_header(arma::uword k_count, arma::uword p, arma::uword j_basis) {
  std::string h = "mu,sigma2";
  for (arma::uword k = 1; k <= k_count; ++k) {
    const std::string pre = ",comp" + std::to_string(k) + "_";
    h += pre + "w";
    for (arma::uword i = 1; i < p; ++i) h += pre + "theta_" + std::to_string(i);
    for (arma::uword i = 1; i <= p; ++i) h += pre + "gamma_" + std::to_string(i);
    for (arma::uword i = 1; i <= j_basis; ++i) h += pre + "knot_" + std::to_string(i);
    for (arma::uword i = 1; i <= j_basis; ++i) h += pre + "c_" + std::to_string(i);
    h += pre + "center_offset";
  }
  return h;
}

}  // namespace

void write_chain_dir(const fs::path& dir, const Chain& chain, const ChainInfo& info) {
  if (chain.draws.empty()) throw std::invalid_argument("write_chain_dir: empty chain");
  const arma::uword draws = chain.draws.size();
  const arma::uword k_count = chain.draws.front().comps.size();
  const arma::uword p = k_count ? chain.draws.front().comps.front().direction.p() : 0;
  const arma::uword j_basis = chain.config.basis_size;
  if (chain.loglik.n_cols != draws)
    throw std::invalid_argument("write_chain_dir: loglik draw count mismatch");
  for (const ModelState& s : chain.draws) {
    if (s.comps.size() != k_count)
      throw std::invalid_argument("write_chain_dir: ragged component count");
    for (const ComponentState& comp : s.comps)
      if (comp.ridge.coeffs.n_elem != j_basis || comp.ridge.knots.basis_size() != j_basis ||
          comp.direction.p() != p)
        throw std::invalid_argument("write_chain_dir: draw shape disagrees with config");
  }
  fs::create_directories(dir);

  json meta{{"config", config_to_json(chain.config)},
            {"seed", info.seed},
            {"dims",
             {{"n", chain.loglik.n_rows},
              {"draws", draws},
              {"p", p},
              {"k", k_count},
              {"j", j_basis}}},
            {"accept_rate", vec_to_json(chain.accept_rate)},
            {"dataset", info.dataset},
            {"timings", {{"elapsed_seconds", info.elapsed_seconds}}}};
  atomic_write_text(dir / "meta.json", meta.dump(2) + "\n");

  std::string csv = draws_header(k_count, p, j_basis);
  csv += '\n';
  csv.reserve(csv.size() + draws * (k_count * (3 * p + 2 * j_basis) + 2) * 18);
  for (const ModelState& s : chain.draws) {
    csv += fmt(s.mu);
    csv += ',';
    csv += fmt(s.sigma2);
    for (const ComponentState& comp : s.comps) {
      csv += ',';
      csv += fmt(comp.w);
      for (double v : comp.direction.theta()) {
        csv += ',';
        csv += fmt(v);
      }
      for (double v : comp.direction.gamma()) {
        csv += ',';
        csv += fmt(v);
      }
      csv += ',';
      csv += fmt(comp.ridge.knots.lo);
      for (double v : comp.ridge.knots.interior) {
        csv += ',';
        csv += fmt(v);
      }
      csv += ',';
      csv += fmt(comp.ridge.knots.hi);
      for (double v : comp.ridge.coeffs) {
        csv += ',';
        csv += fmt(v);
      }
      csv += ',';
      csv += fmt(comp.ridge.center_offset);
    }
    csv += '\n';
  }
  atomic_write_text(dir / "draws.csv", csv);

  // row-major n x draws == column-major draws x n
  const arma::mat by_row = chain.loglik.t();
  atomic_write_bytes(dir / "loglik.bin", by_row.memptr(),
                     by_row.n_elem * sizeof(double));
}

LoadedChain read_chain_dir(const fs::path& dir) {
  const json meta = read_json_file(dir / "meta.json");
  LoadedChain out;
  out.chain.config = config_from_json(meta.at("config"));
  out.info.seed = meta.at("seed").get<std::uint64_t>();
  out.info.dataset = meta.at("dataset").get<std::string>();
  out.info.elapsed_seconds = meta.at("timings").at("elapsed_seconds").get<double>();
  out.chain.accept_rate = vec_from_json(meta.at("accept_rate"));
  const json& dims = meta.at("dims");
  const arma::uword n = dims.at("n").get<arma::uword>();
  const arma::uword draws = dims.at("draws").get<arma::uword>();
  const arma::uword p = dims.at("p").get<arma::uword>();
  const arma::uword k_count = dims.at("k").get<arma::uword>();
  const arma::uword j_basis = dims.at("j").get<arma::uword>();

  const fs::path csv_path = dir / "draws.csv";
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open " + csv_path.string());
  std::string line;
  if (!next_line(in, line) || line != draws_header(k_count, p, j_basis))
    throw std::runtime_error(csv_path.string() + ": header does not match meta.json dims");
  const arma::uword row_fields = 2 + k_count * (1 + (p - 1) + p + 2 * j_basis + 1);
  arma::uword row = 1;
  while (next_line(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::string where = csv_path.string() + " line " + std::to_string(row);
    const auto f = split_csv(line);
    if (f.size() != row_fields)
      throw std::runtime_error(where + ": expected " + std::to_string(row_fields) +
                               " fields, got " + std::to_string(f.size()));
    ModelState s;
    arma::uword at = 0;
    s.mu = parse_double(f[at++], where);
    s.sigma2 = parse_double(f[at++], where);
    for (arma::uword k = 0; k < k_count; ++k) {
      ComponentState comp;
      comp.w = parse_double(f[at++], where);
      arma::vec theta(p - 1), gamma(p);
      for (auto& v : theta) v = parse_double(f[at++], where);
      for (auto& v : gamma) v = parse_double(f[at++], where);
      comp.direction = Direction::from_parts(std::move(gamma), std::move(theta));
      comp.ridge.knots.lo = parse_double(f[at++], where);
      comp.ridge.knots.interior.set_size(j_basis - 2);
      for (auto& v : comp.ridge.knots.interior) v = parse_double(f[at++], where);
      comp.ridge.knots.hi = parse_double(f[at++], where);
      comp.ridge.coeffs.set_size(j_basis);
      for (auto& v : comp.ridge.coeffs) v = parse_double(f[at++], where);
      comp.ridge.center_offset = parse_double(f[at++], where);
      comp.lambda = out.chain.config.lambda_init;
      comp.m.assign(p - 1, 0);
      s.comps.push_back(std::move(comp));
    }
    out.chain.draws.push_back(std::move(s));
  }
  if (out.chain.draws.size() != draws)
    throw std::runtime_error(csv_path.string() + ": draw count does not match meta.json");

  const fs::path bin_path = dir / "loglik.bin";
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + bin_path.string());
  arma::mat by_row(draws, n);
  bin.read(reinterpret_cast<char*>(by_row.memptr()),
           std::streamsize(by_row.n_elem * sizeof(double)));
  if (arma::uword(bin.gcount()) != by_row.n_elem * sizeof(double) || bin.peek() != EOF)
    throw std::runtime_error(bin_path.string() + ": size does not match meta.json dims");
  out.chain.loglik = by_row.t();
  return out;
}

}  // namespace ppbr
