#pragma once

#include <cmath>
#include <cstdint>

namespace sleepbench {

/// Deterministic 64-bit generator (splitmix64). The exact update is part of
/// the library contract so that seeded runs reproduce across platforms:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   output = z ^ (z >> 31)
///
/// Doubles take the top 53 bits of one output, giving values in [0, 1).
/// Independent streams are derived with mix(), never by sharing one Rng
/// across owners.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return scramble(state_);
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

  /// Unbiased integer in [0, bound) via rejection sampling. bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Standard normal via Box-Muller (two uniform draws per call).
  double next_gaussian() {
    const double u1 = std::max(next_double(), 0x1.0p-53);
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  std::uint64_t state() const { return state_; }

  /// Derives the seed of an independent stream from a base seed and a stream
  /// tag. Used to give every benchmark cell its own generator.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t tag) {
    return scramble(scramble(seed + 0x9E3779B97F4A7C15ull) ^ tag);
  }

 private:
  static std::uint64_t scramble(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace sleepbench
