#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "pixmap/image.hpp"

namespace pixmap {

using Complex = std::complex<double>;

/// Dense H x W plane of values, row-major.
template <typename T>
struct Plane {
  int height = 0;
  int width = 0;
  std::vector<T> values;

  T at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
  T& at(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
};

using RealPlane = Plane<double>;
using ComplexPlane = Plane<Complex>;

/// In-place 1-D DFT of any length (radix-2 for powers of two, Bluestein
/// otherwise). inverse=true applies the conjugate transform scaled by 1/n.
void fft(std::span<Complex> data, bool inverse);

/// Unnormalized forward 2-D DFT.
ComplexPlane dft2(const RealPlane& channel);
ComplexPlane dft2(const ComplexPlane& input);
/// Inverse of dft2, including the 1/(HW) factor.
ComplexPlane idft2(const ComplexPlane& spectrum);

/// |DFT|^2 with DC moved to (H/2, W/2) (integer division).
struct Spectrum2D {
  int height = 0;
  int width = 0;
  std::vector<double> power;

  double at(int y, int x) const { return power[static_cast<std::size_t>(y) * width + x]; }
};

Spectrum2D power_spectrum(const RealPlane& channel);
/// Channel-averaged power spectrum of one image.
Spectrum2D power_spectrum(const ImageF& img);
/// Element-wise mean over images of their channel-averaged spectra.
Spectrum2D mean_spectrum(std::span<const ImageF> images);

/// Mean power per integer radius, where a bin's radius is its Euclidean
/// distance to the DC bin rounded to the nearest integer. Radii run up to the
/// farthest (corner) bin so that sum(values * counts) equals total power.
struct RadialProfile {
  std::vector<double> values;
  std::vector<long> counts;
};

RadialProfile azimuthal_profile(const Spectrum2D& spectrum);

/// Mean profile value over the top third of radii divided by the mean over
/// radii 1..floor(R/3), where R is the largest radius.
double band_ratio(const RadialProfile& profile);

/// "radius,mean_power,count" CSV. With log_scale the power column is
/// log10(power + 1e-30) and the header says so.
std::string profile_to_csv(const RadialProfile& profile, bool log_scale);

/// Log-scaled, max-normalized 8-bit rendering of a spectrum as PGM bytes.
std::vector<std::uint8_t> spectrum_heatmap_pgm(const Spectrum2D& spectrum);

RealPlane channel_plane(const ImageF& img, int c);

}  // namespace pixmap
