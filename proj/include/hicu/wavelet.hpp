#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hicu/kspace.hpp"

namespace hicu {

enum class Wavelet { Haar, Db2 };

/// "haar" or "db2"; anything else is a ConfigError.
Wavelet parse_wavelet(std::string_view name);
std::string wavelet_name(Wavelet w);

/// Orthonormal analysis filter pair (sum of squares of each is 1).
struct WaveletFilters {
  std::vector<double> lowpass;
  std::vector<double> highpass;
};
WaveletFilters wavelet_filters(Wavelet w);

/// Complex soft threshold (x / |x|) * max(|x| - t, 0), with soft(0, t) = 0.
/// This is the proximal map of t|u|.
Complex soft(Complex x, double t);

/// Undecimated 2-D wavelet decomposition of one complex plane.
///
/// Level j filters with taps dilated by 2^j and periodic boundaries, so every
/// band keeps the full nx x ny size and any image size is admissible. Each
/// level stores three detail bands in the order (lo-x hi-y, hi-x lo-y,
/// hi-x hi-y); `approximation` is the final low-low band.
struct SwtCoefficients {
  int nx = 0;
  int ny = 0;
  Wavelet wavelet = Wavelet::Haar;
  std::vector<std::array<std::vector<Complex>, 3>> details;
  std::vector<Complex> approximation;

  int levels() const { return static_cast<int>(details.size()); }
};

SwtCoefficients swt2(std::span<const Complex> image, int nx, int ny, Wavelet wavelet,
                     int levels);

/// Inverse of swt2. The undecimated orthonormal transform is a tight frame
/// with redundancy 2 per axis, so synthesis is the transposed filter bank
/// scaled by 1/2 per axis (the average of the shifted decimated inverses).
std::vector<Complex> iswt2(const SwtCoefficients& coeffs);

/// Decompose, soft-threshold every detail band (the approximation band is
/// untouched), reconstruct.
std::vector<Complex> swt_soft_threshold(std::span<const Complex> image, int nx, int ny,
                                        double threshold, Wavelet wavelet, int levels);

}  // namespace hicu
