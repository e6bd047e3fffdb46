#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace swarmdet {

// splitmix64 finalizer; used to fan one global seed out into independent
// substreams without correlation between (purpose, index) pairs.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

enum class SeedPurpose : std::uint64_t {
  datagen = 1,
  placement = 2,
  shuffle = 3,
  init = 4,
  acceptance = 5,
};

inline std::uint64_t derive_seed(std::uint64_t seed, SeedPurpose purpose,
                                 std::uint64_t index = 0) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(purpose) + 1);
  z = mix64(z);
  z += 0x9E3779B97F4A7C15ull * (index + 1);
  return mix64(z);
}

// Deterministic random stream. Distributions are implemented by hand on top
// of mt19937_64 so that generated datasets are identical across platforms and
// standard-library versions (std::*_distribution is implementation-defined).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream derive(std::uint64_t seed, SeedPurpose purpose,
                             std::uint64_t index = 0) {
    return RandomStream(derive_seed(seed, purpose, index));
  }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // uniform integer in [lo, hi], inclusive
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    const auto wide = static_cast<unsigned __int128>(engine_()) * range;
    return lo + static_cast<std::int64_t>(wide >> 64);
  }

  // standard normal pair via Box-Muller (no cached state)
  std::pair<double, double> gaussian_pair() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  double gaussian() { return gaussian_pair().first; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace swarmdet
