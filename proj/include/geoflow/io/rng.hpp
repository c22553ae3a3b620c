#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace geoflow::io {

/// xoshiro256** stream. A run owns one root stream derived from its seed; each
/// stochastic consumer draws from `substream(label)`, so adding a consumer never
/// perturbs the numbers another consumer sees.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  Rng substream(std::string_view label) const;

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
};

/// GEOFLOW_SEED when set, otherwise `fallback`. Throws ConfigError if the variable is
/// set but not a non-negative integer.
std::uint64_t seed_from_env(std::uint64_t fallback);

}  // namespace geoflow::io
