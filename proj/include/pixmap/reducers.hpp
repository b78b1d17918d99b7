#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pixmap/image.hpp"
#include "pixmap/spectral.hpp"

namespace pixmap {

/// Zeroes every DC-centred frequency with radius < cutoff * min(H, W) / 2
/// and returns the real part of the inverse transform, per channel.
ImageF highpass(const Image8& img, double cutoff_fraction);
RealPlane highpass(const RealPlane& plane, double cutoff_fraction);

/// Fisher-Yates permutation of n tile slots: output slot t holds input tile
/// perm[t]. For i = n-1 down to 1, swap perm[i] with perm[below(i + 1)].
std::vector<int> tile_permutation(int tiles, std::uint64_t seed);

/// Permutes non-overlapping patch x patch tiles (row-major slots).
Image8 patch_shuffle(const Image8& img, int patch, std::uint64_t seed);

/// Block-anchor residual: each pixel minus the top-left pixel of its
/// block x block cell, per channel. A proxy for neighbouring-pixel residuals.
ImageF npr_residual(const Image8& img, int block = 2);

/// Preprocessing applied in front of the detector.
struct ReducerSpec {
  enum class Kind { kNone, kHighpass, kShuffle, kNpr, kFixed, kRandom };

  Kind kind = Kind::kNone;
  double cutoff = 0.25;  // highpass only
  int patch = 8;         // shuffle only

  bool operator==(const ReducerSpec&) const = default;
};

/// Accepts none | fixed | random | npr | highpass[:cutoff] | shuffle:N.
ReducerSpec parse_reducer(std::string_view text);
/// Canonical text form; parse_reducer(to_string(r)) == r.
std::string to_string(const ReducerSpec& spec);

/// Throws unless the reducer can run on a crop x crop input.
void validate_reducer(const ReducerSpec& spec, int crop);

/// Detector-ready input. `sample_seed` drives the stochastic reducers
/// (shuffle permutation, random tables). Results are on roughly unit scale:
/// none, shuffle use v / 127.5 - 1; highpass, npr are divided by 127.5;
/// fixed and random use their tables directly.
ImageF apply_reducer(const Image8& img, const ReducerSpec& spec,
                     std::uint64_t sample_seed);

}  // namespace pixmap
