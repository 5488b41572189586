#pragma once

#include <cstdint>

namespace covercheck {

/// splitmix64 stream. Streams derived with keyed() from (seed, a, b) are
/// statistically independent, which is what the per-trial reproducibility
/// contract relies on.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static SplitMix64 keyed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    SplitMix64 s(seed);
    s.state_ += 0x9E3779B97F4A7C15ULL * (a + 1);
    s.next();
    s.state_ += 0x9E3779B97F4A7C15ULL * (b + 1);
    s.next();
    return s;
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace covercheck
