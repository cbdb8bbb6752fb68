#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace adelim {

/// SplitMix64 counter generator. Streams are derived from a master seed by
/// index hashing, so per-mode and per-trajectory draws are pure functions of
/// (seed, index) and independent of scheduling or worker count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  /// Stream seed for substream `index` of `seed`.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    return mix(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform double in (0, 1].
  double uniform() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Box-Muller pair of independent standard normals.
  std::pair<double, double> normal_pair() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  std::uint64_t state_;
};

}  // namespace adelim
