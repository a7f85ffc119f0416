#pragma once

#include <cstdint>

namespace blackwell {

/// SplitMix64. Small, seedable, and byte-stable across platforms, which the
/// deterministic-report contract needs (the standard distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform-ish value in [0, bound); bound >= 1. Modulo bias is irrelevant
  /// at the tiny bounds used here.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  /// Uniform-ish value in [lo, hi], inclusive.
  int range(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// Derives an independent generator; used to give suites stable sub-seeds.
  Rng fork(std::uint64_t salt) { return Rng(next() ^ (salt * 0x9e3779b97f4a7c15ULL)); }

 private:
  std::uint64_t state_;
};

}  // namespace blackwell
