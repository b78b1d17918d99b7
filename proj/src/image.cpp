#include "pixmap/image.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "pixmap/error.hpp"
#include "pixmap/rng.hpp"

namespace pixmap {

namespace {

void check_dims(int height, int width, int channels) {
  if (height < 1 || width < 1 || channels < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "image dimensions must be positive, got " +
                    std::to_string(height) + "x" + std::to_string(width) +
                    "x" + std::to_string(channels));
  }
}

std::size_t sample_count(int height, int width, int channels) {
  return static_cast<std::size_t>(height) * width * channels;
}

// Minimal tokenizer for netpbm-style headers.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string token() {
    skip_space_and_comments();
    std::string out;
    while (pos_ < bytes_.size() && !is_space(bytes_[pos_]) &&
           bytes_[pos_] != '#') {
      out.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (out.empty()) {
      throw Error(ErrorCode::kMalformedHeader, "unexpected end of header");
    }
    return out;
  }

  long number(const char* what) {
    const std::string tok = token();
    long value = 0;
    for (char c : tok) {
      if (c < '0' || c > '9' || value > 1'000'000'000L) {
        throw Error(ErrorCode::kMalformedHeader,
                    std::string("bad ") + what + " '" + tok + "'");
      }
      value = value * 10 + (c - '0');
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the payload.
  void single_space() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw Error(ErrorCode::kMalformedHeader,
                  "missing whitespace before payload");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }

 private:
  static bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void append(std::vector<std::uint8_t>& out, const std::string& s) {
  out.insert(out.end(), s.begin(), s.end());
}

}  // namespace

Image8::Image8(int height, int width)
    : Image8(height, width,
             std::vector<std::uint8_t>(sample_count(height, width, 3), 0)) {}

Image8::Image8(int height, int width, std::vector<std::uint8_t> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_dims(height, width, kChannels);
  if (data_.size() != sample_count(height, width, kChannels)) {
    throw Error(ErrorCode::kShapeMismatch, "Image8 data length mismatch");
  }
}

ImageF::ImageF(int height, int width, int channels, double fill)
    : ImageF(height, width, channels,
             std::vector<double>(sample_count(height, width, channels), fill)) {}

ImageF::ImageF(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  check_dims(height, width, channels);
  if (data_.size() != sample_count(height, width, channels)) {
    throw Error(ErrorCode::kShapeMismatch, "ImageF data length mismatch");
  }
}

std::vector<double> ImageF::plane(int c) const {
  std::vector<double> out(static_cast<std::size_t>(height_) * width_);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = data_[i * channels_ + c];
  }
  return out;
}

void ImageF::set_plane(int c, std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(height_) * width_) {
    throw Error(ErrorCode::kShapeMismatch, "plane size mismatch");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    data_[i * channels_ + c] = values[i];
  }
}

Image8 decode_ppm(std::span<const std::uint8_t> bytes) {
  HeaderReader reader(bytes);
  const std::string magic = reader.token();
  if (magic != "P6") {
    throw Error(ErrorCode::kUnsupportedFormat,
                "unsupported format '" + magic + "', only binary P6 is read");
  }
  const long width = reader.number("width");
  const long height = reader.number("height");
  const long maxval = reader.number("maxval");
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kMalformedHeader, "zero image dimension");
  }
  if (maxval != 255) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "unsupported maxval " + std::to_string(maxval));
  }
  reader.single_space();
  const std::size_t need = sample_count(static_cast<int>(height),
                                        static_cast<int>(width), 3);
  const std::size_t start = reader.position();
  if (bytes.size() - start < need) {
    throw Error(ErrorCode::kTruncatedPayload,
                "payload has " + std::to_string(bytes.size() - start) +
                    " bytes, expected " + std::to_string(need));
  }
  std::vector<std::uint8_t> data(bytes.begin() + start,
                                 bytes.begin() + start + need);
  return Image8(static_cast<int>(height), static_cast<int>(width),
                std::move(data));
}

std::vector<std::uint8_t> encode_ppm(const Image8& img) {
  std::vector<std::uint8_t> out;
  append(out, "P6\n" + std::to_string(img.width()) + " " +
                  std::to_string(img.height()) + "\n255\n");
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

Image8 read_ppm(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return decode_ppm(bytes);
}

void write_ppm(const std::filesystem::path& path, const Image8& img) {
  write_file_atomic(path, encode_ppm(img));
}

std::pair<int, int> crop_offsets(int height, int width, const CropSpec& spec) {
  if (spec.size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "crop size must be >= 1");
  }
  if (spec.size > height || spec.size > width) {
    throw Error(ErrorCode::kInvalidArgument,
                "crop " + std::to_string(spec.size) + " larger than image " +
                    std::to_string(height) + "x" + std::to_string(width));
  }
  if (std::holds_alternative<CenterCrop>(spec.mode)) {
    return {(height - spec.size) / 2, (width - spec.size) / 2};
  }
  SplitMix64 rng(std::get<RandomCrop>(spec.mode).seed);
  const int top = static_cast<int>(rng.below(height - spec.size + 1));
  const int left = static_cast<int>(rng.below(width - spec.size + 1));
  return {top, left};
}

Image8 crop(const Image8& img, const CropSpec& spec) {
  const auto [top, left] = crop_offsets(img.height(), img.width(), spec);
  Image8 out(spec.size, spec.size);
  const std::size_t row_bytes = static_cast<std::size_t>(spec.size) * 3;
  for (int y = 0; y < spec.size; ++y) {
    const auto src = img.data().subspan(
        (static_cast<std::size_t>(top + y) * img.width() + left) * 3, row_bytes);
    std::copy(src.begin(), src.end(),
              out.data().begin() + static_cast<std::ptrdiff_t>(y * row_bytes));
  }
  return out;
}

ImageF to_float(const Image8& img) {
  std::vector<double> data(img.data().begin(), img.data().end());
  return ImageF(img.height(), img.width(), 3, std::move(data));
}

double round_half_even(double x) {
  const double lower = std::floor(x);
  const double frac = x - lower;
  if (frac > 0.5) return lower + 1.0;
  if (frac < 0.5) return lower;
  return std::fmod(lower, 2.0) == 0.0 ? lower : lower + 1.0;
}

Image8 quantize(const ImageF& img, double lo, double hi) {
  if (!(lo < hi)) {
    throw Error(ErrorCode::kInvalidArgument, "quantize requires lo < hi");
  }
  if (img.channels() != 3) {
    throw Error(ErrorCode::kShapeMismatch, "quantize expects 3 channels");
  }
  Image8 out(img.height(), img.width());
  const double scale = 255.0 / (hi - lo);
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    double v = (src[i] - lo) * scale;
    v = std::clamp(v, 0.0, 255.0);
    dst[i] = static_cast<std::uint8_t>(round_half_even(v));
  }
  return out;
}

std::vector<std::uint8_t> encode_imagef(const ImageF& img) {
  std::vector<std::uint8_t> out;
  append(out, "PIXMAP-F1\n" + std::to_string(img.height()) + " " +
                  std::to_string(img.width()) + " " +
                  std::to_string(img.channels()) + "\n");
  out.reserve(out.size() + img.size() * 8);
  for (double v : img.data()) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
    }
  }
  return out;
}

ImageF decode_imagef(std::span<const std::uint8_t> bytes) {
  HeaderReader reader(bytes);
  if (reader.token() != "PIXMAP-F1") {
    throw Error(ErrorCode::kUnsupportedFormat, "not a PIXMAP-F1 file");
  }
  const long h = reader.number("height");
  const long w = reader.number("width");
  const long c = reader.number("channels");
  reader.single_space();
  if (h < 1 || w < 1 || c < 1) {
    throw Error(ErrorCode::kMalformedHeader, "zero image dimension");
  }
  const std::size_t n = sample_count(static_cast<int>(h), static_cast<int>(w),
                                     static_cast<int>(c));
  const std::size_t start = reader.position();
  if (bytes.size() - start < n * 8) {
    throw Error(ErrorCode::kTruncatedPayload, "float raster truncated");
  }
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(bytes[start + i * 8 + b]) << (8 * b);
    }
    data[i] = std::bit_cast<double>(bits);
  }
  return ImageF(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c),
                std::move(data));
}

void write_imagef(const std::filesystem::path& path, const ImageF& img) {
  write_file_atomic(path, encode_imagef(img));
}

ImageF read_imagef(const std::filesystem::path& path) {
  return decode_imagef(read_file(path));
}

std::vector<std::uint8_t> encode_pgm(int height, int width,
                                     std::span<const std::uint8_t> plane) {
  if (plane.size() != static_cast<std::size_t>(height) * width) {
    throw Error(ErrorCode::kShapeMismatch, "PGM plane size mismatch");
  }
  std::vector<std::uint8_t> out;
  append(out, "P5\n" + std::to_string(width) + " " + std::to_string(height) +
                  "\n255\n");
  out.insert(out.end(), plane.begin(), plane.end());
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw Error(ErrorCode::kIo, "short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(
                                        text.data()),
                                    text.size()));
}

}  // namespace pixmap
