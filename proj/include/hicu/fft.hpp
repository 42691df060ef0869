#pragma once

#include <span>

#include "hicu/kspace.hpp"

namespace hicu {

/// Centred, orthonormal 2-D DFT of an nx x ny plane stored x fastest.
///
///   forward:  k = fftshift(fft2(ifftshift(img))) / sqrt(nx * ny)
///   inverse:  img = fftshift(ifft2(ifftshift(k))) / sqrt(nx * ny)
///
/// The DC sample sits at (nx / 2, ny / 2). Both directions are unitary, so
/// Frobenius norms carry over between k-space and image space.
class CenteredFft2 {
 public:
  CenteredFft2(int nx, int ny);
  ~CenteredFft2();
  CenteredFft2(const CenteredFft2&) = delete;
  CenteredFft2& operator=(const CenteredFft2&) = delete;
  CenteredFft2(CenteredFft2&& other) noexcept;
  CenteredFft2& operator=(CenteredFft2&& other) noexcept;

  int nx() const { return nx_; }
  int ny() const { return ny_; }

  void forward(std::span<Complex> plane);
  void inverse(std::span<Complex> plane);

 private:
  void transform(std::span<Complex> plane, bool forward);
  void release();

  int nx_ = 0;
  int ny_ = 0;
  Complex* buffer_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Per-coil centred inverse DFT: k-space to coil images.
MultiCoilKSpace to_images(const MultiCoilKSpace& kspace);
/// Per-coil centred forward DFT: coil images to k-space.
MultiCoilKSpace to_kspace(const MultiCoilKSpace& images);

}  // namespace hicu
