#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pixmap/image.hpp"

namespace pixmap {

enum class Upsampler { kNearest, kBilinear, kZeroInsertConv };
enum class Family { kA, kB };

std::string_view to_string(Upsampler u);
std::string_view to_string(Family f);
Upsampler parse_upsampler(std::string_view text);
Family parse_family(std::string_view text);

/// Recipe for one synthetic image. Everything random is drawn from `seed`.
struct GeneratorSpec {
  bool fake = false;
  Upsampler upsampler = Upsampler::kNearest;  // fakes only
  Family family = Family::kA;
  double brightness_shift = 0.0;
  double noise_sigma = 0.0;
  int size = 64;
  std::uint64_t seed = 0;

  // Texture parameters. blur_sigma unset means "draw from [1, 3]".
  std::optional<double> blur_sigma;
  double field_amplitude = 30.0;    // std of the smooth field, in levels
  double pattern_amplitude = 24.0;  // peak-to-peak family gradient
  double brightness_jitter = 6.0;   // per-image uniform offset half-width
  double residual_noise = 0.3;      // fakes: full-size noise / noise_sigma
};

/// Smooth camera-like field: blurred Gaussian noise, family gradient
/// (A horizontal, B vertical), brightness, sensor noise; quantized.
Image8 gen_real(const GeneratorSpec& spec);

/// A size/2 base built like gen_real (sensor noise included), upsampled x2,
/// plus a weaker full-size noise (residual_noise * noise_sigma), quantized.
Image8 gen_fake(const GeneratorSpec& spec);

/// Dispatches on spec.fake.
Image8 generate(const GeneratorSpec& spec);

/// Real-valued content field at `size` as gen_real builds it, before noise.
ImageF smooth_field(const GeneratorSpec& spec, int size, std::uint64_t seed);

ImageF upsample2x(const ImageF& img, Upsampler upsampler);

struct ManifestEntry {
  std::string path;  // relative to the manifest's directory
  int label = 0;     // 0 real, 1 fake
  std::string generator;  // "real" or an upsampler name
  std::string family;     // "A" or "B"
  std::uint64_t seed = 0;

  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::uint64_t seed = 0;
};

/// CSV with header "path,label,generator,family,seed".
std::string manifest_to_csv(const DatasetManifest& manifest);
DatasetManifest manifest_from_csv(std::string_view text);
DatasetManifest read_manifest(const std::filesystem::path& dir);

struct BenchmarkSpec {
  Upsampler train_upsampler = Upsampler::kNearest;
  Upsampler test_upsampler = Upsampler::kBilinear;
  bool confound = true;
  int n_per_class = 500;
  std::uint64_t seed = 1;
  int size = 64;
  double noise_sigma = 1.0;
  double family_brightness = 64.0;  // family A gets -x, family B +x
  double field_amplitude = 1.0;
  double pattern_amplitude = 6.0;
  double brightness_jitter = 6.0;
  double residual_noise = 0.3;
};

/// The generator recipe behind one manifest entry.
GeneratorSpec entry_spec(const BenchmarkSpec& bench, const ManifestEntry& entry);

struct Benchmark {
  DatasetManifest train;
  DatasetManifest test;
};

/// Plans both splits without touching the filesystem. With confound, train
/// pairs reals with family A and fakes with family B; test swaps the families
/// and switches the fake upsampler. Without confound, each image draws its
/// family from its own seed.
Benchmark plan_benchmark(const BenchmarkSpec& bench);

/// Plans, renders and writes <dir>/train, <dir>/test (PPM files plus
/// manifest.csv) and <dir>/benchmark.json with the spec snapshot.
Benchmark build_benchmark(const BenchmarkSpec& bench,
                          const std::filesystem::path& dir);

std::string benchmark_to_json(const BenchmarkSpec& bench);
BenchmarkSpec benchmark_from_json(std::string_view text);

}  // namespace pixmap
