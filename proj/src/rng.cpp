#include "pixmap/rng.hpp"

#include <cmath>
#include <numbers>

namespace pixmap {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double SplitMix64::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  // Rejection on the top of the range keeps the result unbiased.
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return x % bound;
}

double SplitMix64::normal() {
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose,
                          std::uint64_t index) {
  return mix64(mix64(root ^ hash_tag(purpose)) + mix64(index + 1));
}

}  // namespace pixmap
