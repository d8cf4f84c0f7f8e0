#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace ppbr {

// Derives the seed of a named sub-stream, e.g. "fit/gridpoint-3/rep-0".
std::uint64_t substream_seed(std::uint64_t seed, std::string_view stream);

// Every stochastic routine draws from one of these. All variates reduce to
// raw mt19937_64 output, whose sequence the standard fully specifies, so a
// seed reproduces the same stream bit-for-bit; none of the implementation-
// defined std:: distribution classes are used. Copying an Rng snapshots the
// stream, which is what chain checkpointing relies on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}
  Rng(std::uint64_t seed, std::string_view stream) : Rng(substream_seed(seed, stream)) {}

  // New independent stream derived from this stream's origin seed; unaffected
  // by how much has been consumed here.
  Rng fork(std::string_view stream) const { return Rng(substream_seed(seed_, stream)); }

  double uniform();  // [0, 1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  double gamma(double shape, double scale);
  double inv_gamma(double shape, double rate);  // density ∝ x^{-shape-1} e^{-rate/x}
  double beta(double a, double b);
  bool bernoulli(double prob) { return uniform() < prob; }
  std::uint64_t integer(std::uint64_t n);  // uniform on {0, ..., n-1}

  std::string serialize() const;
  static Rng deserialize(const std::string& text);

  friend bool operator==(const Rng& a, const Rng& b) {
    return a.seed_ == b.seed_ && a.eng_ == b.eng_;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace ppbr
