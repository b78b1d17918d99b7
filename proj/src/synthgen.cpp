#include "pixmap/synthgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "pixmap/error.hpp"
#include "pixmap/rng.hpp"

namespace pixmap {

namespace {

int reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Separable blur with mirrored borders.
std::vector<double> blur(const std::vector<double>& in, int size, double sigma) {
  const auto k = gaussian_kernel(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  std::vector<double> tmp(in.size()), out(in.size());
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        acc += k[t + radius] * in[y * size + reflect(x + t, size)];
      }
      tmp[y * size + x] = acc;
    }
  }
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        acc += k[t + radius] * tmp[reflect(y + t, size) * size + x];
      }
      out[y * size + x] = acc;
    }
  }
  return out;
}

// Blurred white noise rescaled to zero mean and unit variance.
std::vector<double> unit_field(SplitMix64& rng, int size, double sigma) {
  std::vector<double> noise(static_cast<std::size_t>(size) * size);
  for (auto& v : noise) v = rng.normal();
  auto field = blur(noise, size, sigma);
  double mean = 0.0;
  for (double v : field) mean += v;
  mean /= static_cast<double>(field.size());
  double var = 0.0;
  for (double v : field) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(field.size()));
  for (auto& v : field) v = sd > 0.0 ? (v - mean) / sd : 0.0;
  return field;
}

void check_spec(const GeneratorSpec& spec) {
  if (spec.size < 2 || spec.size % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "generator size must be even");
  }
  if (spec.noise_sigma < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "noise_sigma must be >= 0");
  }
}

void add_sensor_noise(ImageF& field, double noise_sigma, std::uint64_t seed) {
  if (noise_sigma <= 0.0) return;
  SplitMix64 rng(derive_seed(seed, "sensor"));
  for (auto& v : field.data()) v += noise_sigma * rng.normal();
}

// Linear interpolation weights of half-pixel-aligned x2 upsampling.
double bilinear_axis(const ImageF& in, int oy, int ox, int c) {
  auto src = [](int o, int n) {
    const int i = o / 2;
    const int j = (o % 2 == 0) ? std::max(i - 1, 0) : std::min(i + 1, n - 1);
    return std::pair{i, j};
  };
  const auto [y0, y1] = src(oy, in.height());
  const auto [x0, x1] = src(ox, in.width());
  return 0.5625 * in.at(y0, x0, c) + 0.1875 * in.at(y0, x1, c) +
         0.1875 * in.at(y1, x0, c) + 0.0625 * in.at(y1, x1, c);
}

}  // namespace

std::string_view to_string(Upsampler u) {
  switch (u) {
    case Upsampler::kNearest: return "nearest";
    case Upsampler::kBilinear: return "bilinear";
    case Upsampler::kZeroInsertConv: return "zero_insert_conv";
  }
  return "nearest";
}

std::string_view to_string(Family f) { return f == Family::kA ? "A" : "B"; }

Upsampler parse_upsampler(std::string_view text) {
  if (text == "nearest") return Upsampler::kNearest;
  if (text == "bilinear") return Upsampler::kBilinear;
  if (text == "zero_insert_conv") return Upsampler::kZeroInsertConv;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown upsampler '" + std::string(text) + "'");
}

Family parse_family(std::string_view text) {
  if (text == "A") return Family::kA;
  if (text == "B") return Family::kB;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown family '" + std::string(text) + "'");
}

ImageF smooth_field(const GeneratorSpec& spec, int size, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const double sigma = spec.blur_sigma ? *spec.blur_sigma : rng.uniform(1.0, 3.0);
  // Lengths are relative to the full output size, so a half-size base gets
  // half the blur and the same gradient per output pixel.
  const double scale = static_cast<double>(size) / spec.size;
  const double jitter = rng.uniform(-spec.brightness_jitter, spec.brightness_jitter);
  std::array<double, 3> tint{};
  for (auto& t : tint) t = rng.uniform(-4.0, 4.0);

  const auto luma = unit_field(rng, size, std::max(sigma * scale, 0.5));
  ImageF out(size, size, 3);
  for (int c = 0; c < 3; ++c) {
    const auto chroma = unit_field(rng, size, std::max(sigma * scale, 0.5));
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const double along = spec.family == Family::kA ? x : y;
        const double ramp =
            size > 1 ? along / (size - 1) - 0.5 : 0.0;
        const std::size_t i = static_cast<std::size_t>(y) * size + x;
        out.at(y, x, c) = 128.0 + spec.brightness_shift + jitter + tint[c] +
                          spec.field_amplitude * (0.9 * luma[i] + 0.3 * chroma[i]) +
                          spec.pattern_amplitude * ramp;
      }
    }
  }
  return out;
}

ImageF upsample2x(const ImageF& in, Upsampler upsampler) {
  const int h = in.height() * 2;
  const int w = in.width() * 2;
  ImageF out(h, w, in.channels());
  switch (upsampler) {
    case Upsampler::kNearest:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          for (int c = 0; c < in.channels(); ++c)
            out.at(y, x, c) = in.at(y / 2, x / 2, c);
      break;
    case Upsampler::kBilinear:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          for (int c = 0; c < in.channels(); ++c)
            out.at(y, x, c) = bilinear_axis(in, y, x, c);
      break;
    case Upsampler::kZeroInsertConv: {
      // Zero insertion followed by a 3x3 box of gain 4/9, which keeps the
      // mean but weights even/odd output phases 1 : 2 : 4.
      ImageF sparse(h, w, in.channels());
      for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x)
          for (int c = 0; c < in.channels(); ++c)
            sparse.at(2 * y, 2 * x, c) = in.at(y, x, c);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          for (int c = 0; c < in.channels(); ++c) {
            double acc = 0.0;
            for (int dy = -1; dy <= 1; ++dy)
              for (int dx = -1; dx <= 1; ++dx) {
                // Mirrored borders keep edge phases consistent.
                acc += sparse.at(reflect(y + dy, h), reflect(x + dx, w), c);
              }
            out.at(y, x, c) = acc * 4.0 / 9.0;
          }
      break;
    }
  }
  return out;
}

Image8 gen_real(const GeneratorSpec& spec) {
  check_spec(spec);
  if (spec.fake) {
    throw Error(ErrorCode::kInvalidArgument, "gen_real needs a real spec");
  }
  ImageF field = smooth_field(spec, spec.size, spec.seed);
  add_sensor_noise(field, spec.noise_sigma, spec.seed);
  return quantize(field, 0.0, 255.0);
}

Image8 gen_fake(const GeneratorSpec& spec) {
  check_spec(spec);
  if (!spec.fake) {
    throw Error(ErrorCode::kInvalidArgument, "gen_fake needs a fake spec");
  }
  // The sensor noise belongs to the half-size base, so the fine grain of a
  // fake is upsampled along with its content.
  ImageF base = smooth_field(spec, spec.size / 2, spec.seed);
  add_sensor_noise(base, spec.noise_sigma, spec.seed);
  ImageF out = upsample2x(base, spec.upsampler);
  add_sensor_noise(out, spec.residual_noise * spec.noise_sigma,
                   derive_seed(spec.seed, "residual"));
  return quantize(out, 0.0, 255.0);
}

Image8 generate(const GeneratorSpec& spec) {
  return spec.fake ? gen_fake(spec) : gen_real(spec);
}

std::string manifest_to_csv(const DatasetManifest& manifest) {
  std::string out = "path,label,generator,family,seed\n";
  for (const auto& e : manifest.entries) {
    out += e.path + ',' + std::to_string(e.label) + ',' + e.generator + ',' +
           e.family + ',' + std::to_string(e.seed) + '\n';
  }
  return out;
}

DatasetManifest manifest_from_csv(std::string_view text) {
  DatasetManifest manifest;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "path,label,generator,family,seed") {
    throw Error(ErrorCode::kMalformedHeader, "manifest header mismatch");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() != 5) {
      throw Error(ErrorCode::kMalformedHeader,
                  "manifest line " + std::to_string(line_no) + ": 5 columns expected");
    }
    ManifestEntry e;
    e.path = cols[0];
    e.generator = cols[2];
    e.family = cols[3];
    if (cols[1] != "0" && cols[1] != "1") {
      throw Error(ErrorCode::kMalformedHeader,
                  "manifest line " + std::to_string(line_no) + ": bad label");
    }
    e.label = cols[1] == "1";
    const auto res = std::from_chars(cols[4].data(),
                                     cols[4].data() + cols[4].size(), e.seed);
    if (res.ec != std::errc{}) {
      throw Error(ErrorCode::kMalformedHeader,
                  "manifest line " + std::to_string(line_no) + ": bad seed");
    }
    if ((e.generator == "real") != (e.label == 0)) {
      throw Error(ErrorCode::kMalformedHeader,
                  "manifest line " + std::to_string(line_no) +
                      ": label disagrees with generator");
    }
    if (e.family != "A" && e.family != "B") {
      throw Error(ErrorCode::kMalformedHeader,
                  "manifest line " + std::to_string(line_no) + ": bad family");
    }
    if (e.label == 1) parse_upsampler(e.generator);
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

DatasetManifest read_manifest(const std::filesystem::path& dir) {
  const auto bytes = read_file(dir / "manifest.csv");
  return manifest_from_csv(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

GeneratorSpec entry_spec(const BenchmarkSpec& bench, const ManifestEntry& entry) {
  GeneratorSpec spec;
  spec.fake = entry.label == 1;
  if (spec.fake) spec.upsampler = parse_upsampler(entry.generator);
  spec.family = parse_family(entry.family);
  spec.brightness_shift = spec.family == Family::kA ? -bench.family_brightness
                                                     : bench.family_brightness;
  spec.noise_sigma = bench.noise_sigma;
  spec.size = bench.size;
  spec.seed = entry.seed;
  spec.field_amplitude = bench.field_amplitude;
  spec.pattern_amplitude = bench.pattern_amplitude;
  spec.brightness_jitter = bench.brightness_jitter;
  spec.residual_noise = bench.residual_noise;
  return spec;
}

Benchmark plan_benchmark(const BenchmarkSpec& bench) {
  if (bench.n_per_class < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_per_class must be >= 1");
  }
  auto plan_split = [&](const std::string& split, Upsampler fake_up,
                        Family real_family, Family fake_family) {
    DatasetManifest m;
    m.seed = bench.seed;
    for (int label = 0; label < 2; ++label) {
      const std::string gen = label ? std::string(to_string(fake_up)) : "real";
      for (int i = 0; i < bench.n_per_class; ++i) {
        ManifestEntry e;
        e.label = label;
        e.generator = gen;
        e.seed = derive_seed(bench.seed, split + "/" + gen,
                             static_cast<std::uint64_t>(i));
        Family family = label ? fake_family : real_family;
        if (!bench.confound) {
          family = (derive_seed(e.seed, "family") & 1) ? Family::kB : Family::kA;
        }
        e.family = std::string(to_string(family));
        char name[64];
        std::snprintf(name, sizeof name, "%s_%05d.ppm", gen.c_str(), i);
        e.path = name;
        m.entries.push_back(std::move(e));
      }
    }
    return m;
  };
  Benchmark b;
  b.train = plan_split("train", bench.train_upsampler, Family::kA, Family::kB);
  b.test = plan_split("test", bench.test_upsampler, Family::kB, Family::kA);
  return b;
}

Benchmark build_benchmark(const BenchmarkSpec& bench,
                          const std::filesystem::path& dir) {
  Benchmark b = plan_benchmark(bench);
  for (const auto& [split, manifest] :
       {std::pair{"train", &b.train}, std::pair{"test", &b.test}}) {
    const auto split_dir = dir / split;
    std::filesystem::create_directories(split_dir);
    for (const auto& e : manifest->entries) {
      write_ppm(split_dir / e.path, generate(entry_spec(bench, e)));
    }
    write_text_atomic(split_dir / "manifest.csv", manifest_to_csv(*manifest));
  }
  write_text_atomic(dir / "benchmark.json", benchmark_to_json(bench));
  return b;
}

std::string benchmark_to_json(const BenchmarkSpec& bench) {
  nlohmann::ordered_json j;
  j["train_upsampler"] = to_string(bench.train_upsampler);
  j["test_upsampler"] = to_string(bench.test_upsampler);
  j["confound"] = bench.confound;
  j["n_per_class"] = bench.n_per_class;
  j["seed"] = bench.seed;
  j["size"] = bench.size;
  j["noise_sigma"] = bench.noise_sigma;
  j["family_brightness"] = bench.family_brightness;
  j["field_amplitude"] = bench.field_amplitude;
  j["pattern_amplitude"] = bench.pattern_amplitude;
  j["residual_noise"] = bench.residual_noise;
  j["brightness_jitter"] = bench.brightness_jitter;
  return j.dump(2) + "\n";
}

BenchmarkSpec benchmark_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    BenchmarkSpec b;
    b.train_upsampler = parse_upsampler(j.at("train_upsampler").get<std::string>());
    b.test_upsampler = parse_upsampler(j.at("test_upsampler").get<std::string>());
    b.confound = j.at("confound").get<bool>();
    b.n_per_class = j.at("n_per_class").get<int>();
    b.seed = j.at("seed").get<std::uint64_t>();
    b.size = j.at("size").get<int>();
    b.noise_sigma = j.at("noise_sigma").get<double>();
    b.family_brightness = j.at("family_brightness").get<double>();
    b.field_amplitude = j.at("field_amplitude").get<double>();
    b.pattern_amplitude = j.at("pattern_amplitude").get<double>();
    b.brightness_jitter = j.at("brightness_jitter").get<double>();
    b.residual_noise = j.at("residual_noise").get<double>();
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader,
                std::string("benchmark.json: ") + e.what());
  }
}

}  // namespace pixmap
