#include "pixmap/reducers.hpp"

#include <charconv>
#include <cmath>

#include "pixmap/error.hpp"
#include "pixmap/mapping.hpp"
#include "pixmap/rng.hpp"

namespace pixmap {

namespace {

void check_cutoff(double cutoff) {
  if (!(cutoff > 0.0 && cutoff < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "highpass cutoff must lie in (0, 1)");
  }
}

void check_divides(int step, int height, int width, const char* what) {
  if (step < 1 || height % step != 0 || width % step != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " " + std::to_string(step) +
                    " must divide " + std::to_string(height) + "x" +
                    std::to_string(width));
  }
}

ImageF scaled(ImageF img, double factor) {
  for (auto& v : img.data()) v *= factor;
  return img;
}

}  // namespace

RealPlane highpass(const RealPlane& plane, double cutoff_fraction) {
  check_cutoff(cutoff_fraction);
  ComplexPlane f = dft2(plane);
  const int h = plane.height;
  const int w = plane.width;
  const double radius = cutoff_fraction * std::min(h, w) / 2.0;
  for (int y = 0; y < h; ++y) {
    const int dy = (y + h / 2) % h - h / 2;
    for (int x = 0; x < w; ++x) {
      const int dx = (x + w / 2) % w - w / 2;
      if (std::hypot(dy, dx) < radius) f.at(y, x) = 0.0;
    }
  }
  const ComplexPlane back = idft2(f);
  RealPlane out{h, w, std::vector<double>(back.values.size())};
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = back.values[i].real();
  }
  return out;
}

ImageF highpass(const Image8& img, double cutoff_fraction) {
  check_cutoff(cutoff_fraction);
  const ImageF src = to_float(img);
  ImageF out(img.height(), img.width(), 3);
  for (int c = 0; c < 3; ++c) {
    out.set_plane(c, highpass(channel_plane(src, c), cutoff_fraction).values);
  }
  return out;
}

std::vector<int> tile_permutation(int tiles, std::uint64_t seed) {
  std::vector<int> perm(tiles);
  for (int i = 0; i < tiles; ++i) perm[i] = i;
  SplitMix64 rng(seed);
  for (int i = tiles - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

Image8 patch_shuffle(const Image8& img, int patch, std::uint64_t seed) {
  check_divides(patch, img.height(), img.width(), "patch");
  const int rows = img.height() / patch;
  const int cols = img.width() / patch;
  const auto perm = tile_permutation(rows * cols, seed);
  Image8 out(img.height(), img.width());
  for (int slot = 0; slot < rows * cols; ++slot) {
    const int src_y = (perm[slot] / cols) * patch;
    const int src_x = (perm[slot] % cols) * patch;
    const int dst_y = (slot / cols) * patch;
    const int dst_x = (slot % cols) * patch;
    for (int y = 0; y < patch; ++y) {
      for (int x = 0; x < patch; ++x) {
        for (int c = 0; c < 3; ++c) {
          out.at(dst_y + y, dst_x + x, c) = img.at(src_y + y, src_x + x, c);
        }
      }
    }
  }
  return out;
}

ImageF npr_residual(const Image8& img, int block) {
  check_divides(block, img.height(), img.width(), "block");
  ImageF out(img.height(), img.width(), 3);
  for (int y = 0; y < img.height(); ++y) {
    const int ay = y - y % block;
    for (int x = 0; x < img.width(); ++x) {
      const int ax = x - x % block;
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) = static_cast<double>(img.at(y, x, c)) -
                          static_cast<double>(img.at(ay, ax, c));
      }
    }
  }
  return out;
}

ReducerSpec parse_reducer(std::string_view text) {
  using Kind = ReducerSpec::Kind;
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::kInvalidArgument,
                 "reducer '" + std::string(text) + "': " + why);
  };

  ReducerSpec spec;
  if (name == "none" || name == "fixed" || name == "random" || name == "npr") {
    if (!arg.empty() || colon != std::string_view::npos) {
      throw bad("takes no argument");
    }
    spec.kind = name == "none"    ? Kind::kNone
                : name == "fixed" ? Kind::kFixed
                : name == "random" ? Kind::kRandom
                                   : Kind::kNpr;
    return spec;
  }
  if (name == "highpass") {
    spec.kind = Kind::kHighpass;
    if (colon != std::string_view::npos) {
      const auto res =
          std::from_chars(arg.data(), arg.data() + arg.size(), spec.cutoff);
      if (res.ec != std::errc{} || res.ptr != arg.data() + arg.size()) {
        throw bad("bad cutoff");
      }
    }
    check_cutoff(spec.cutoff);
    return spec;
  }
  if (name == "shuffle") {
    spec.kind = Kind::kShuffle;
    const auto res =
        std::from_chars(arg.data(), arg.data() + arg.size(), spec.patch);
    if (arg.empty() || res.ec != std::errc{} ||
        res.ptr != arg.data() + arg.size() || spec.patch < 1) {
      throw bad("expected shuffle:<patch>");
    }
    return spec;
  }
  throw bad("unknown reducer");
}

std::string to_string(const ReducerSpec& spec) {
  using Kind = ReducerSpec::Kind;
  switch (spec.kind) {
    case Kind::kNone: return "none";
    case Kind::kFixed: return "fixed";
    case Kind::kRandom: return "random";
    case Kind::kNpr: return "npr";
    case Kind::kShuffle: return "shuffle:" + std::to_string(spec.patch);
    case Kind::kHighpass: {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof buf, spec.cutoff);
      return "highpass:" + std::string(buf, res.ptr);
    }
  }
  return "none";
}

void validate_reducer(const ReducerSpec& spec, int crop) {
  using Kind = ReducerSpec::Kind;
  if (spec.kind == Kind::kShuffle) check_divides(spec.patch, crop, crop, "patch");
  if (spec.kind == Kind::kNpr) check_divides(2, crop, crop, "npr block");
  if (spec.kind == Kind::kHighpass) check_cutoff(spec.cutoff);
}

ImageF apply_reducer(const Image8& img, const ReducerSpec& spec,
                     std::uint64_t sample_seed) {
  using Kind = ReducerSpec::Kind;
  switch (spec.kind) {
    case Kind::kNone: {
      const MappingTable table = build_normalization_table();
      return apply_mapping(img, std::span(&table, 1));
    }
    case Kind::kFixed: {
      static const MappingTable table = build_fixed_table();
      return apply_mapping(img, std::span(&table, 1));
    }
    case Kind::kRandom: {
      const auto tables = build_random_tables(sample_seed);
      return apply_mapping(img, tables);
    }
    case Kind::kShuffle: {
      const MappingTable table = build_normalization_table();
      return apply_mapping(patch_shuffle(img, spec.patch, sample_seed),
                           std::span(&table, 1));
    }
    case Kind::kHighpass:
      return scaled(highpass(img, spec.cutoff), 1.0 / 127.5);
    case Kind::kNpr:
      return scaled(npr_residual(img, 2), 1.0 / 127.5);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown reducer kind");
}

}  // namespace pixmap
