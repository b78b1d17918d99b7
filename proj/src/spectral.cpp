#include "pixmap/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "pixmap/error.hpp"

namespace pixmap {

namespace {

bool is_power_of_two(std::size_t n) { return n && (n & (n - 1)) == 0; }

void fft_radix2(std::span<Complex> a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        // Direct twiddles; a recurrence would accumulate rounding error.
        const Complex w = std::polar(1.0, angle * static_cast<double>(k));
        const Complex u = a[start + k];
        const Complex v = a[start + k + len / 2] * w;
        a[start + k] = u + v;
        a[start + k + len / 2] = u - v;
      }
    }
  }
}

// Chirp-z rewrite of an arbitrary-length DFT as a power-of-two convolution.
void fft_bluestein(std::span<Complex> a) {
  const std::size_t n = a.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;

  std::vector<Complex> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k * k) % (2 * n);
    chirp[k] = std::polar(1.0, -std::numbers::pi * static_cast<double>(k2) /
                                   static_cast<double>(n));
  }
  std::vector<Complex> x(m), y(m);
  for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
  y[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    y[k] = y[m - k] = std::conj(chirp[k]);
  }
  fft_radix2(x);
  fft_radix2(y);
  for (std::size_t i = 0; i < m; ++i) x[i] = std::conj(x[i] * y[i]);
  fft_radix2(x);  // conj(fft(conj(.))) / m is the inverse transform
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = std::conj(x[k]) / static_cast<double>(m) * chirp[k];
  }
}

void fft_forward(std::span<Complex> a) {
  if (a.size() <= 1) return;
  if (is_power_of_two(a.size())) {
    fft_radix2(a);
  } else {
    fft_bluestein(a);
  }
}

ComplexPlane transform_2d(ComplexPlane plane, bool inverse) {
  const int h = plane.height;
  const int w = plane.width;
  for (int y = 0; y < h; ++y) {
    fft(std::span(plane.values).subspan(static_cast<std::size_t>(y) * w, w),
        inverse);
  }
  std::vector<Complex> column(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) column[y] = plane.at(y, x);
    fft(column, inverse);
    for (int y = 0; y < h; ++y) plane.at(y, x) = column[y];
  }
  return plane;
}

void require_nonempty(int h, int w) {
  if (h < 1 || w < 1) {
    throw Error(ErrorCode::kInvalidArgument, "plane dimensions must be >= 1");
  }
}

}  // namespace

void fft(std::span<Complex> data, bool inverse) {
  if (!inverse) {
    fft_forward(data);
    return;
  }
  for (auto& v : data) v = std::conj(v);
  fft_forward(data);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v = std::conj(v) * scale;
}

ComplexPlane dft2(const ComplexPlane& input) {
  require_nonempty(input.height, input.width);
  return transform_2d(input, false);
}

ComplexPlane dft2(const RealPlane& channel) {
  require_nonempty(channel.height, channel.width);
  ComplexPlane plane{channel.height, channel.width,
                     std::vector<Complex>(channel.values.begin(),
                                          channel.values.end())};
  return transform_2d(std::move(plane), false);
}

ComplexPlane idft2(const ComplexPlane& spectrum) {
  require_nonempty(spectrum.height, spectrum.width);
  return transform_2d(spectrum, true);
}

Spectrum2D power_spectrum(const RealPlane& channel) {
  const ComplexPlane f = dft2(channel);
  const int h = f.height;
  const int w = f.width;
  Spectrum2D out{h, w, std::vector<double>(f.values.size())};
  for (int y = 0; y < h; ++y) {
    const int sy = (y + h / 2) % h;
    for (int x = 0; x < w; ++x) {
      const int sx = (x + w / 2) % w;
      out.power[static_cast<std::size_t>(sy) * w + sx] = std::norm(f.at(y, x));
    }
  }
  return out;
}

RealPlane channel_plane(const ImageF& img, int c) {
  return RealPlane{img.height(), img.width(), img.plane(c)};
}

Spectrum2D power_spectrum(const ImageF& img) {
  Spectrum2D total{img.height(), img.width(),
                   std::vector<double>(img.size() / img.channels(), 0.0)};
  for (int c = 0; c < img.channels(); ++c) {
    const Spectrum2D s = power_spectrum(channel_plane(img, c));
    for (std::size_t i = 0; i < total.power.size(); ++i) {
      total.power[i] += s.power[i];
    }
  }
  for (auto& p : total.power) p /= img.channels();
  return total;
}

Spectrum2D mean_spectrum(std::span<const ImageF> images) {
  if (images.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mean_spectrum of no images");
  }
  const int h = images.front().height();
  const int w = images.front().width();
  Spectrum2D total{h, w, std::vector<double>(static_cast<std::size_t>(h) * w)};
  for (const auto& img : images) {
    if (img.height() != h || img.width() != w) {
      throw Error(ErrorCode::kShapeMismatch,
                  "mean_spectrum needs equal image dimensions");
    }
    const Spectrum2D s = power_spectrum(img);
    for (std::size_t i = 0; i < total.power.size(); ++i) {
      total.power[i] += s.power[i];
    }
  }
  for (auto& p : total.power) p /= static_cast<double>(images.size());
  return total;
}

RadialProfile azimuthal_profile(const Spectrum2D& spectrum) {
  const int cy = spectrum.height / 2;
  const int cx = spectrum.width / 2;
  std::vector<double> sums;
  std::vector<long> counts;
  for (int y = 0; y < spectrum.height; ++y) {
    for (int x = 0; x < spectrum.width; ++x) {
      const double d = std::hypot(y - cy, x - cx);
      const auto r = static_cast<std::size_t>(std::lround(d));
      if (r >= sums.size()) {
        sums.resize(r + 1, 0.0);
        counts.resize(r + 1, 0);
      }
      sums[r] += spectrum.at(y, x);
      counts[r] += 1;
    }
  }
  RadialProfile profile{std::vector<double>(sums.size()), counts};
  for (std::size_t r = 0; r < sums.size(); ++r) {
    profile.values[r] = counts[r] > 0 ? sums[r] / counts[r] : 0.0;
  }
  return profile;
}

double band_ratio(const RadialProfile& profile) {
  if (profile.values.size() < 6) {
    throw Error(ErrorCode::kInvalidArgument,
                "band_ratio needs at least 6 radii");
  }
  const std::size_t max_radius = profile.values.size() - 1;
  const std::size_t band = max_radius / 3;
  double low = 0.0;
  for (std::size_t r = 1; r <= band; ++r) low += profile.values[r];
  double high = 0.0;
  for (std::size_t r = max_radius - band + 1; r <= max_radius; ++r) {
    high += profile.values[r];
  }
  low /= static_cast<double>(band);
  high /= static_cast<double>(band);
  if (!(low > 0.0)) {
    throw Error(ErrorCode::kDegenerate,
                "degenerate spectrum: no low-band power");
  }
  return high / low;
}

std::string profile_to_csv(const RadialProfile& profile, bool log_scale) {
  std::string out =
      log_scale ? "radius,log10_mean_power,count\n" : "radius,mean_power,count\n";
  char buf[64];
  for (std::size_t r = 0; r < profile.values.size(); ++r) {
    const double v = log_scale ? std::log10(profile.values[r] + 1e-30)
                               : profile.values[r];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out += std::to_string(r) + ',';
    out.append(buf, res.ptr);
    out += ',' + std::to_string(profile.counts[r]) + '\n';
  }
  return out;
}

std::vector<std::uint8_t> spectrum_heatmap_pgm(const Spectrum2D& spectrum) {
  std::vector<double> logp(spectrum.power.size());
  std::transform(spectrum.power.begin(), spectrum.power.end(), logp.begin(),
                 [](double p) { return std::log1p(p); });
  const double peak = *std::max_element(logp.begin(), logp.end());
  std::vector<std::uint8_t> pixels(logp.size());
  for (std::size_t i = 0; i < logp.size(); ++i) {
    const double t = peak > 0.0 ? logp[i] / peak : 0.0;
    pixels[i] = static_cast<std::uint8_t>(std::lround(255.0 * t));
  }
  return encode_pgm(spectrum.height, spectrum.width, pixels);
}

}  // namespace pixmap
