#include "hicu/fft.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "hicu/error.hpp"

namespace hicu {

namespace {

// Circular shift of a plane by (sx, sy): out(x + sx, y + sy) = in(x, y).
void circshift(std::span<const Complex> in, std::span<Complex> out, int nx, int ny, int sx,
               int sy) {
  for (int y = 0; y < ny; ++y) {
    const int ty = (y + sy) % ny;
    for (int x = 0; x < nx; ++x) {
      const int tx = (x + sx) % nx;
      out[tx + static_cast<std::size_t>(nx) * ty] = in[x + static_cast<std::size_t>(nx) * y];
    }
  }
}

}  // namespace

CenteredFft2::CenteredFft2(int nx, int ny) : nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) throw DimensionError("FFT extents must be positive");
  const std::size_t n = static_cast<std::size_t>(nx) * ny;
  buffer_ = reinterpret_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!buffer_) throw std::bad_alloc();
  auto* buf = reinterpret_cast<fftw_complex*>(buffer_);
  // FFTW is row-major: the slow dimension (y) goes first.
  forward_plan_ = fftw_plan_dft_2d(ny, nx, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_2d(ny, nx, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!forward_plan_ || !inverse_plan_) {
    release();
    throw Error("FFTW planning failed");
  }
}

CenteredFft2::~CenteredFft2() { release(); }

CenteredFft2::CenteredFft2(CenteredFft2&& other) noexcept
    : nx_(other.nx_),
      ny_(other.ny_),
      buffer_(std::exchange(other.buffer_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

CenteredFft2& CenteredFft2::operator=(CenteredFft2&& other) noexcept {
  if (this != &other) {
    release();
    nx_ = other.nx_;
    ny_ = other.ny_;
    buffer_ = std::exchange(other.buffer_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    inverse_plan_ = std::exchange(other.inverse_plan_, nullptr);
  }
  return *this;
}

void CenteredFft2::release() {
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  if (buffer_) fftw_free(buffer_);
  forward_plan_ = inverse_plan_ = nullptr;
  buffer_ = nullptr;
}

void CenteredFft2::forward(std::span<Complex> plane) { transform(plane, true); }
void CenteredFft2::inverse(std::span<Complex> plane) { transform(plane, false); }

void CenteredFft2::transform(std::span<Complex> plane, bool forward) {
  const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
  if (plane.size() != n) throw DimensionError("FFT plane size mismatch");
  std::span<Complex> buf(buffer_, n);
  // ifftshift moves the centre sample to the origin.
  circshift(plane, buf, nx_, ny_, nx_ - nx_ / 2, ny_ - ny_ / 2);
  fftw_execute(static_cast<fftw_plan>(forward ? forward_plan_ : inverse_plan_));
  // fftshift moves the origin back to the centre.
  circshift(buf, plane, nx_, ny_, nx_ / 2, ny_ / 2);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : plane) v *= scale;
}

MultiCoilKSpace to_images(const MultiCoilKSpace& kspace) {
  MultiCoilKSpace out = kspace;
  CenteredFft2 fft(kspace.nx(), kspace.ny());
  for (int c = 0; c < out.nc(); ++c) fft.inverse(out.coil(c));
  return out;
}

MultiCoilKSpace to_kspace(const MultiCoilKSpace& images) {
  MultiCoilKSpace out = images;
  CenteredFft2 fft(images.nx(), images.ny());
  for (int c = 0; c < out.nc(); ++c) fft.forward(out.coil(c));
  return out;
}

}  // namespace hicu
