#pragma once

#include <cmath>
#include <cstdint>

#include "salgraph/geometry.hpp"

namespace salgraph {

// SplitMix64 generator. Used everywhere instead of <random> engines so that
// streams are identical across platforms and standard-library versions.
// Sub-steps derive their own generator via derive(), never a shared one.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  // Standard normal via Box-Muller; one fresh draw per call keeps streams
  // independent of call parity.
  double normal() {
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  std::uint64_t state_;
};

// Mixes a parent seed with stream tags so each sub-step owns its own stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b = 0) {
  Rng mixer(seed ^ (tag_a * 0x9E3779B97F4A7C15ull) ^ (tag_b * 0xC2B2AE3D27D4EB4Full));
  return mixer.next_u64();
}

}  // namespace salgraph
