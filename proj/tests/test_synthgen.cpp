#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "doctest.h"
#include "pixmap/error.hpp"
#include "pixmap/spectral.hpp"
#include "pixmap/synthgen.hpp"

using namespace pixmap;

namespace {

double mean_level(const Image8& img) {
  double s = 0.0;
  for (auto v : img.data()) s += v;
  return s / img.size();
}

RadialProfile profile_of(const Image8& img) {
  return azimuthal_profile(power_spectrum(to_float(img)));
}

// Mean power over the top third of radii, relative to total power
// excluding DC, so brightness and contrast differences cancel.
double top_third_share(const Image8& img) {
  const RadialProfile p = profile_of(img);
  const std::size_t n = p.values.size();
  double top = 0.0, all = 0.0;
  for (std::size_t r = 1; r < n; ++r) {
    const double e = p.values[r] * p.counts[r];
    all += e;
    if (r >= n - n / 3) top += e;
  }
  return top / all;
}

// Welch t statistic.
double welch_t(const std::vector<double>& a, const std::vector<double>& b) {
  auto stats = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= v.size();
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, s / (v.size() - 1)};
  };
  const auto [ma, va] = stats(a);
  const auto [mb, vb] = stats(b);
  return (ma - mb) / std::sqrt(va / a.size() + vb / b.size());
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pixmap_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("gen_real is deterministic, smooth and spread out") {
  GeneratorSpec spec;
  spec.blur_sigma = 2.0;
  spec.seed = 17;
  CHECK(gen_real(spec) == gen_real(spec));
  spec.seed = 18;
  CHECK(gen_real(spec) != gen_real(GeneratorSpec{.seed = 17, .blur_sigma = 2.0}));

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GeneratorSpec s;
    s.seed = seed;
    const Image8 img = gen_real(s);
    CHECK(img.height() == 64);
    CHECK(band_ratio(profile_of(img)) < 0.1);
    std::set<int> levels(img.data().begin(), img.data().end());
    CHECK(levels.size() > 30);
  }
}

TEST_CASE("nearest fakes are 2x2 constant without noise") {
  GeneratorSpec spec;
  spec.fake = true;
  spec.upsampler = Upsampler::kNearest;
  spec.seed = 3;
  const Image8 img = gen_fake(spec);
  CHECK(img == gen_fake(spec));
  for (int y = 0; y < 64; y += 2)
    for (int x = 0; x < 64; x += 2)
      for (int c = 0; c < 3; ++c) {
        const auto v = img.at(y, x, c);
        CHECK(img.at(y + 1, x, c) == v);
        CHECK(img.at(y, x + 1, c) == v);
        CHECK(img.at(y + 1, x + 1, c) == v);
      }
}

TEST_CASE("upsample2x kernels") {
  ImageF in(2, 2, 1);
  in.at(0, 0, 0) = 0.0;
  in.at(0, 1, 0) = 4.0;
  in.at(1, 0, 0) = 8.0;
  in.at(1, 1, 0) = 12.0;
  const ImageF bl = upsample2x(in, Upsampler::kBilinear);
  // Output pixel (1, 1) sits a quarter pixel from input (0, 0) towards (1, 1).
  CHECK(bl.at(1, 1, 0) == doctest::Approx(0.5625 * 0 + 0.1875 * 4 + 0.1875 * 8 + 0.0625 * 12));
  CHECK(bl.at(0, 0, 0) == doctest::Approx(0.0));  // clamped corner

  const ImageF flat(4, 4, 1, 9.0);
  const ImageF zi = upsample2x(flat, Upsampler::kZeroInsertConv);
  double mean = 0.0;
  for (double v : zi.data()) mean += v;
  CHECK(mean / zi.size() == doctest::Approx(9.0));
  // Phase pattern of the zero-insertion kernel.
  CHECK(zi.at(2, 2, 0) == doctest::Approx(4.0));
  CHECK(zi.at(2, 3, 0) == doctest::Approx(8.0));
  CHECK(zi.at(3, 3, 0) == doctest::Approx(16.0));
}

TEST_CASE("zero insertion leaves a high-frequency peak real images lack") {
  // A local maximum at least twice both neighbours.
  auto has_top_peak = [](const RadialProfile& p) {
    const std::size_t n = p.values.size();
    for (std::size_t r = n - n / 3; r + 1 < n; ++r) {
      if (p.values[r] > 2 * p.values[r - 1] && p.values[r] > 2 * p.values[r + 1]) return true;
    }
    return false;
  };
  std::vector<ImageF> fakes, reals;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    reals.push_back(to_float(gen_real(spec)));
    spec.fake = true;
    spec.upsampler = Upsampler::kZeroInsertConv;
    fakes.push_back(to_float(gen_fake(spec)));
  }
  CHECK(has_top_peak(azimuthal_profile(mean_spectrum(fakes))));
  CHECK_FALSE(has_top_peak(azimuthal_profile(mean_spectrum(reals))));
}

TEST_CASE("plan_benchmark structure") {
  BenchmarkSpec bench;
  bench.n_per_class = 100;
  const Benchmark b = plan_benchmark(bench);
  for (const auto* m : {&b.train, &b.test}) {
    REQUIRE(m->entries.size() == 200);
    int fakes = 0;
    std::set<std::string> paths;
    for (const auto& e : m->entries) {
      fakes += e.label;
      CHECK(e.label == (e.generator == "real" ? 0 : 1));
      paths.insert(e.path);
    }
    CHECK(fakes == 100);
    CHECK(paths.size() == 200);
  }
  for (const auto& e : b.train.entries) {
    CHECK(e.family == (e.label ? "B" : "A"));
    if (e.label) CHECK(e.generator == "nearest");
  }
  for (const auto& e : b.test.entries) {
    CHECK(e.family == (e.label ? "A" : "B"));
    if (e.label) CHECK(e.generator == "bilinear");
  }
  CHECK(plan_benchmark(bench).train.entries == b.train.entries);
  bench.n_per_class = 0;
  CHECK_THROWS_AS(plan_benchmark(bench), Error);
}

TEST_CASE("without confound both splits mix families alike") {
  BenchmarkSpec bench;
  bench.confound = false;
  bench.n_per_class = 200;
  const Benchmark b = plan_benchmark(bench);
  auto share_b = [](const DatasetManifest& m, int label) {
    int n = 0, nb = 0;
    for (const auto& e : m.entries) {
      if (e.label != label) continue;
      ++n;
      nb += e.family == "B";
    }
    return static_cast<double>(nb) / n;
  };
  for (int label : {0, 1}) {
    CHECK(std::abs(share_b(b.train, label) - 0.5) < 0.1);
    CHECK(std::abs(share_b(b.test, label) - 0.5) < 0.1);
  }
}

TEST_CASE("a brightness threshold solves train and fails test") {
  BenchmarkSpec bench;
  bench.n_per_class = 100;
  const Benchmark b = plan_benchmark(bench);
  auto brightness = [&](const DatasetManifest& m) {
    std::vector<std::pair<double, int>> out;
    for (const auto& e : m.entries) out.emplace_back(mean_level(generate(entry_spec(bench, e))), e.label);
    return out;
  };
  const auto train = brightness(b.train);
  const auto test = brightness(b.test);
  auto acc = [](const std::vector<std::pair<double, int>>& v, double t) {
    int ok = 0;
    for (auto [m, l] : v) ok += (m > t) == (l == 1);
    return static_cast<double>(ok) / v.size();
  };
  double best_t = 0.0, best = 0.0;
  for (const auto& [m, l] : train) {
    if (acc(train, m) > best) {
      best = acc(train, m);
      best_t = m;
    }
  }
  CHECK(best > 0.9);
  CHECK(acc(test, best_t) < 0.5);
}

TEST_CASE("fake and real spectra separate at high radii, families do not") {
  BenchmarkSpec bench;
  std::vector<double> real_a, real_b;
  std::map<Upsampler, std::vector<double>> fakes;
  for (std::uint64_t i = 0; i < 60; ++i) {
    for (Family f : {Family::kA, Family::kB}) {
      GeneratorSpec spec = entry_spec(bench, {"x", 0, "real", std::string(to_string(f)), 1000 + i});
      (f == Family::kA ? real_a : real_b).push_back(top_third_share(generate(spec)));
    }
    for (Upsampler u : {Upsampler::kNearest, Upsampler::kBilinear, Upsampler::kZeroInsertConv}) {
      GeneratorSpec spec = entry_spec(bench, {"x", 1, std::string(to_string(u)), "A", 2000 + i});
      fakes[u].push_back(top_third_share(generate(spec)));
    }
  }
  std::vector<double> reals = real_a;
  reals.insert(reals.end(), real_b.begin(), real_b.end());
  for (const auto& [u, shares] : fakes) {
    CAPTURE(to_string(u));
    CHECK(std::abs(welch_t(shares, reals)) > 5.0);
  }
  CHECK(std::abs(welch_t(real_a, real_b)) < 3.0);
}

TEST_CASE("manifest csv round trip and validation") {
  const Benchmark b = plan_benchmark(BenchmarkSpec{.n_per_class = 3});
  const std::string csv = manifest_to_csv(b.train);
  CHECK(csv.rfind("path,label,generator,family,seed\n", 0) == 0);
  CHECK(manifest_from_csv(csv).entries == b.train.entries);
  CHECK_THROWS_AS(manifest_from_csv("path,label,generator,family,seed\na.ppm,1,real,A,1\n"), Error);
  CHECK_THROWS_AS(manifest_from_csv("path,label,generator,family,seed\na.ppm,0,real,C,1\n"), Error);
  CHECK_THROWS_AS(manifest_from_csv("bogus\n"), Error);
}

TEST_CASE("benchmark files regenerate byte-identically") {
  const auto dir = temp_dir("regen");
  BenchmarkSpec bench;
  bench.n_per_class = 4;
  bench.seed = 9;
  build_benchmark(bench, dir);
  const BenchmarkSpec loaded = benchmark_from_json(
      [&] {
        const auto bytes = read_file(dir / "benchmark.json");
        return std::string(bytes.begin(), bytes.end());
      }());
  CHECK(benchmark_to_json(loaded) == benchmark_to_json(bench));
  for (const char* split : {"train", "test"}) {
    const DatasetManifest m = read_manifest(dir / split);
    REQUIRE(m.entries.size() == 8);
    for (const auto& e : m.entries) {
      CHECK(read_file(dir / split / e.path) == encode_ppm(generate(entry_spec(loaded, e))));
    }
  }
  std::filesystem::remove_all(dir);
}
