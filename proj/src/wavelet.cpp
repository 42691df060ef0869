#include "hicu/wavelet.hpp"

#include <cmath>

#include "hicu/error.hpp"

namespace hicu {

Wavelet parse_wavelet(std::string_view name) {
  if (name == "haar") return Wavelet::Haar;
  if (name == "db2") return Wavelet::Db2;
  throw ConfigError("unsupported wavelet '" + std::string(name) + "' (expected haar or db2)");
}

std::string wavelet_name(Wavelet w) { return w == Wavelet::Haar ? "haar" : "db2"; }

WaveletFilters wavelet_filters(Wavelet w) {
  WaveletFilters f;
  if (w == Wavelet::Haar) {
    f.lowpass = {M_SQRT1_2, M_SQRT1_2};
  } else {
    const double s3 = std::sqrt(3.0);
    const double d = 4.0 * std::sqrt(2.0);
    f.lowpass = {(1 + s3) / d, (3 + s3) / d, (3 - s3) / d, (1 - s3) / d};
  }
  // Quadrature mirror: g[k] = (-1)^k h[L-1-k].
  const std::size_t len = f.lowpass.size();
  f.highpass.resize(len);
  for (std::size_t k = 0; k < len; ++k) {
    f.highpass[k] = (k % 2 == 0 ? 1.0 : -1.0) * f.lowpass[len - 1 - k];
  }
  return f;
}

Complex soft(Complex x, double t) {
  const double mag = std::abs(x);
  if (mag <= t) return Complex(0.0);
  return x * ((mag - t) / mag);
}

namespace {

using Plane = std::vector<Complex>;

// dst[i] += h * src[(i + shift) mod n] for a contiguous line of n samples.
void add_shifted(Complex* dst, const Complex* src, int n, int shift, double h) {
  for (int i = 0; i < n - shift; ++i) dst[i] += h * src[i + shift];
  for (int i = n - shift; i < n; ++i) dst[i] += h * src[i + shift - n];
}

// dst[(i + shift) mod n] += h * src[i]
void add_unshifted(Complex* dst, const Complex* src, int n, int shift, double h) {
  for (int i = 0; i < n - shift; ++i) dst[i + shift] += h * src[i];
  for (int i = n - shift; i < n; ++i) dst[i + shift - n] += h * src[i];
}

// One-dimensional periodic correlation along x (axis 0) or y (axis 1) with
// taps spaced `step` apart: out[i] = sum_k h[k] in[i + k*step].
Plane analyze(const Plane& in, int nx, int ny, const std::vector<double>& h, int step,
              int axis) {
  Plane out(in.size(), Complex(0.0));
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (axis == 0) {
      const int shift = static_cast<int>((static_cast<long>(k) * step) % nx);
      for (int y = 0; y < ny; ++y) {
        const std::size_t row = static_cast<std::size_t>(nx) * y;
        add_shifted(out.data() + row, in.data() + row, nx, shift, h[k]);
      }
    } else {
      for (int y = 0; y < ny; ++y) {
        const int src = static_cast<int>((y + static_cast<long>(k) * step) % ny);
        Complex* d = out.data() + static_cast<std::size_t>(nx) * y;
        const Complex* s = in.data() + static_cast<std::size_t>(nx) * src;
        for (int x = 0; x < nx; ++x) d[x] += h[k] * s[x];
      }
    }
  }
  return out;
}

// Transpose of analyze, accumulated into `out`: out[i + k*step] += h[k] in[i].
void synthesize_into(Plane& out, const Plane& in, int nx, int ny, const std::vector<double>& h,
                     int step, int axis) {
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (axis == 0) {
      const int shift = static_cast<int>((static_cast<long>(k) * step) % nx);
      for (int y = 0; y < ny; ++y) {
        const std::size_t row = static_cast<std::size_t>(nx) * y;
        add_unshifted(out.data() + row, in.data() + row, nx, shift, h[k]);
      }
    } else {
      for (int y = 0; y < ny; ++y) {
        const int dst = static_cast<int>((y + static_cast<long>(k) * step) % ny);
        Complex* d = out.data() + static_cast<std::size_t>(nx) * dst;
        const Complex* s = in.data() + static_cast<std::size_t>(nx) * y;
        for (int x = 0; x < nx; ++x) d[x] += h[k] * s[x];
      }
    }
  }
}

// Inverse of the (lo, hi) split along one axis.
Plane merge(const Plane& lo, const Plane& hi, int nx, int ny, const WaveletFilters& f, int step,
            int axis) {
  Plane out(lo.size(), Complex(0.0));
  synthesize_into(out, lo, nx, ny, f.lowpass, step, axis);
  synthesize_into(out, hi, nx, ny, f.highpass, step, axis);
  for (auto& v : out) v *= 0.5;
  return out;
}

}  // namespace

SwtCoefficients swt2(std::span<const Complex> image, int nx, int ny, Wavelet wavelet,
                     int levels) {
  if (nx < 1 || ny < 1 || image.size() != static_cast<std::size_t>(nx) * ny) {
    throw DimensionError("image size does not match extents");
  }
  if (levels < 1) throw ConfigError("wavelet levels must be at least 1");
  const WaveletFilters f = wavelet_filters(wavelet);
  SwtCoefficients out;
  out.nx = nx;
  out.ny = ny;
  out.wavelet = wavelet;
  Plane approx(image.begin(), image.end());
  for (int level = 0; level < levels; ++level) {
    const int step = 1 << level;
    const Plane lo_x = analyze(approx, nx, ny, f.lowpass, step, 0);
    const Plane hi_x = analyze(approx, nx, ny, f.highpass, step, 0);
    out.details.push_back({analyze(lo_x, nx, ny, f.highpass, step, 1),
                           analyze(hi_x, nx, ny, f.lowpass, step, 1),
                           analyze(hi_x, nx, ny, f.highpass, step, 1)});
    approx = analyze(lo_x, nx, ny, f.lowpass, step, 1);
  }
  out.approximation = std::move(approx);
  return out;
}

std::vector<Complex> iswt2(const SwtCoefficients& coeffs) {
  const WaveletFilters f = wavelet_filters(coeffs.wavelet);
  const int nx = coeffs.nx;
  const int ny = coeffs.ny;
  Plane approx = coeffs.approximation;
  for (int level = coeffs.levels() - 1; level >= 0; --level) {
    const int step = 1 << level;
    const auto& d = coeffs.details[level];
    const Plane lo_x = merge(approx, d[0], nx, ny, f, step, 1);
    const Plane hi_x = merge(d[1], d[2], nx, ny, f, step, 1);
    approx = merge(lo_x, hi_x, nx, ny, f, step, 0);
  }
  return approx;
}

std::vector<Complex> swt_soft_threshold(std::span<const Complex> image, int nx, int ny,
                                        double threshold, Wavelet wavelet, int levels) {
  if (!(threshold >= 0.0)) throw ConfigError("threshold must be non-negative");
  SwtCoefficients c = swt2(image, nx, ny, wavelet, levels);
  if (threshold > 0.0) {
    for (auto& level : c.details)
      for (auto& band : level)
        for (auto& v : band) v = soft(v, threshold);
  }
  return iswt2(c);
}

}  // namespace hicu
