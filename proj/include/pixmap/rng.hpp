#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace pixmap {

// SplitMix64 (Steele, Lea & Flood). Every distribution below is implemented
// here rather than through <random> distributions, whose outputs differ
// between standard library implementations.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return next(); }
  std::uint64_t next();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  /// Unbiased integer in [0, bound); bound must be >= 1.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller (no cached second variate).
  double normal();

 private:
  std::uint64_t state_;
};

/// The SplitMix64 finalizer, usable as a standalone 64-bit mixer.
std::uint64_t mix64(std::uint64_t x);

/// Stable 64-bit FNV-1a hash of a purpose tag.
std::uint64_t hash_tag(std::string_view tag);

/// Hierarchical seed derivation: child seed for (root, purpose, index).
/// Any image, crop or table can be regenerated from these three values.
std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose,
                          std::uint64_t index = 0);

}  // namespace pixmap
