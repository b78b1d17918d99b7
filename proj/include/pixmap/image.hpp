#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pixmap {

/// H x W x 3 raster of 8-bit samples, row-major, channels interleaved.
class Image8 {
 public:
  static constexpr int kChannels = 3;

  Image8() = default;
  Image8(int height, int width);
  Image8(int height, int width, std::vector<std::uint8_t> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return kChannels; }
  std::size_t size() const { return data_.size(); }

  std::uint8_t at(int y, int x, int c) const {
    return data_[index(y, x, c)];
  }
  std::uint8_t& at(int y, int x, int c) { return data_[index(y, x, c)]; }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  bool operator==(const Image8&) const = default;

 private:
  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * kChannels + c;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> data_;
};

/// H x W x C raster of doubles, row-major, channels interleaved.
class ImageF {
 public:
  ImageF() = default;
  ImageF(int height, int width, int channels, double fill = 0.0);
  ImageF(int height, int width, int channels, std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t size() const { return data_.size(); }

  double at(int y, int x, int c) const { return data_[index(y, x, c)]; }
  double& at(int y, int x, int c) { return data_[index(y, x, c)]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  /// Copies channel c out as a dense H x W plane.
  std::vector<double> plane(int c) const;
  void set_plane(int c, std::span<const double> values);

  bool operator==(const ImageF&) const = default;

 private:
  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

struct CenterCrop {};
struct RandomCrop {
  std::uint64_t seed = 0;
};

struct CropSpec {
  int size = 0;
  std::variant<CenterCrop, RandomCrop> mode;
};

/// Decodes binary PPM (P6, maxval 255). Comments in the header are allowed.
Image8 decode_ppm(std::span<const std::uint8_t> bytes);
/// Canonical P6: "P6\n<w> <h>\n255\n" followed by the samples.
std::vector<std::uint8_t> encode_ppm(const Image8& img);

Image8 read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const Image8& img);

/// Square window of spec.size; throws if the image is smaller.
Image8 crop(const Image8& img, const CropSpec& spec);
/// Crop offsets (row, column) that crop() would use.
std::pair<int, int> crop_offsets(int height, int width, const CropSpec& spec);

ImageF to_float(const Image8& img);
/// Affine [lo, hi] -> [0, 255], clamped, rounded half to even.
Image8 quantize(const ImageF& img, double lo, double hi);

double round_half_even(double x);

// Float raster files: text header "PIXMAP-F1\n<h> <w> <c>\n" followed by
// little-endian IEEE-754 binary64 samples in row-major, interleaved order.
std::vector<std::uint8_t> encode_imagef(const ImageF& img);
ImageF decode_imagef(std::span<const std::uint8_t> bytes);
void write_imagef(const std::filesystem::path& path, const ImageF& img);
ImageF read_imagef(const std::filesystem::path& path);

/// Binary PGM (P5) of an 8-bit plane.
std::vector<std::uint8_t> encode_pgm(int height, int width,
                                     std::span<const std::uint8_t> plane);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
/// Writes via a temporary sibling and rename, so readers never see a partial
/// file.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes);
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text);

}  // namespace pixmap
