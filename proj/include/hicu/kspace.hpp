#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hicu {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

/// Multi-coil k-space (or coil image) array, nx x ny x nc.
///
/// Storage is contiguous with x fastest, then y, then coil. This is the same
/// ordering used by the on-disk format and by the external denoiser protocol.
class MultiCoilKSpace {
 public:
  MultiCoilKSpace() = default;
  MultiCoilKSpace(int nx, int ny, int nc);
  MultiCoilKSpace(int nx, int ny, int nc, std::vector<Complex> data);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nc() const { return nc_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(int x, int y, int c) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(nx_) *
               (static_cast<std::size_t>(y) + static_cast<std::size_t>(ny_) * c);
  }

  Complex& operator()(int x, int y, int c) { return data_[index(x, y, c)]; }
  const Complex& operator()(int x, int y, int c) const { return data_[index(x, y, c)]; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  /// Contiguous nx*ny plane of one coil.
  std::span<Complex> coil(int c);
  std::span<const Complex> coil(int c) const;

  bool same_shape(const MultiCoilKSpace& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_ && nc_ == other.nc_;
  }

  bool all_finite() const;
  double squared_norm() const;
  double norm() const;

  MultiCoilKSpace& operator+=(const MultiCoilKSpace& other);
  MultiCoilKSpace& operator-=(const MultiCoilKSpace& other);
  MultiCoilKSpace& operator*=(Complex s);

  /// this += alpha * other
  void axpy(Complex alpha, const MultiCoilKSpace& other);

  /// Bitwise equality of the stored values.
  friend bool operator==(const MultiCoilKSpace& a, const MultiCoilKSpace& b);

 private:
  int nx_ = 0;
  int ny_ = 0;
  int nc_ = 0;
  std::vector<Complex> data_;
};

MultiCoilKSpace operator-(MultiCoilKSpace a, const MultiCoilKSpace& b);
MultiCoilKSpace operator+(MultiCoilKSpace a, const MultiCoilKSpace& b);

/// Standard complex inner product <a, b> = sum conj(a) * b.
Complex inner(const MultiCoilKSpace& a, const MultiCoilKSpace& b);

/// Binary sampling pattern over (x, y), shared by every coil.
class SamplingMask {
 public:
  SamplingMask() = default;
  SamplingMask(int nx, int ny, bool value = false);
  SamplingMask(int nx, int ny, std::vector<std::uint8_t> bits);

  int nx() const { return nx_; }
  int ny() const { return ny_; }

  bool operator()(int x, int y) const { return bits_[x + static_cast<std::size_t>(nx_) * y] != 0; }
  void set(int x, int y, bool v) { bits_[x + static_cast<std::size_t>(nx_) * y] = v ? 1 : 0; }

  std::span<const std::uint8_t> bits() const { return bits_; }
  std::size_t count() const;
  double sampled_fraction() const;

  /// True when the mask matches the (x, y) extent of a k-space array.
  bool fits(const MultiCoilKSpace& y) const { return nx_ == y.nx() && ny_ == y.ny(); }

  friend bool operator==(const SamplingMask&, const SamplingMask&) = default;

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Zero every unsampled entry: returns mask o y.
MultiCoilKSpace apply_mask(const MultiCoilKSpace& y, const SamplingMask& mask);

}  // namespace hicu
