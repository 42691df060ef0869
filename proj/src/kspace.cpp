#include "hicu/kspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "hicu/error.hpp"

namespace hicu {

namespace {

std::size_t checked_volume(int nx, int ny, int nc) {
  if (nx < 1 || ny < 1 || nc < 1) {
    throw DimensionError("k-space extents must be positive, got " + std::to_string(nx) + "x" +
                         std::to_string(ny) + "x" + std::to_string(nc));
  }
  return static_cast<std::size_t>(nx) * ny * nc;
}

void require_same_shape(const MultiCoilKSpace& a, const MultiCoilKSpace& b) {
  if (!a.same_shape(b)) throw DimensionError("k-space shape mismatch");
}

}  // namespace

MultiCoilKSpace::MultiCoilKSpace(int nx, int ny, int nc)
    : nx_(nx), ny_(ny), nc_(nc), data_(checked_volume(nx, ny, nc)) {}

MultiCoilKSpace::MultiCoilKSpace(int nx, int ny, int nc, std::vector<Complex> data)
    : nx_(nx), ny_(ny), nc_(nc), data_(std::move(data)) {
  if (data_.size() != checked_volume(nx, ny, nc)) {
    throw DimensionError("k-space payload length " + std::to_string(data_.size()) +
                         " does not match extents");
  }
}

std::span<Complex> MultiCoilKSpace::coil(int c) {
  const std::size_t plane = static_cast<std::size_t>(nx_) * ny_;
  return std::span<Complex>(data_).subspan(plane * c, plane);
}

std::span<const Complex> MultiCoilKSpace::coil(int c) const {
  const std::size_t plane = static_cast<std::size_t>(nx_) * ny_;
  return std::span<const Complex>(data_).subspan(plane * c, plane);
}

bool MultiCoilKSpace::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

double MultiCoilKSpace::squared_norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return s;
}

double MultiCoilKSpace::norm() const { return std::sqrt(squared_norm()); }

MultiCoilKSpace& MultiCoilKSpace::operator+=(const MultiCoilKSpace& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

MultiCoilKSpace& MultiCoilKSpace::operator-=(const MultiCoilKSpace& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

MultiCoilKSpace& MultiCoilKSpace::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  return *this;
}

void MultiCoilKSpace::axpy(Complex alpha, const MultiCoilKSpace& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * other.data_[i];
}

bool operator==(const MultiCoilKSpace& a, const MultiCoilKSpace& b) {
  if (!a.same_shape(b)) return false;
  // Compare representations so that -0.0 vs 0.0 and NaN payloads count.
  return std::equal(a.data_.begin(), a.data_.end(), b.data_.begin(),
                    [](const Complex& u, const Complex& v) {
                      return std::memcmp(&u, &v, sizeof(Complex)) == 0;
                    });
}

MultiCoilKSpace operator-(MultiCoilKSpace a, const MultiCoilKSpace& b) {
  a -= b;
  return a;
}

MultiCoilKSpace operator+(MultiCoilKSpace a, const MultiCoilKSpace& b) {
  a += b;
  return a;
}

Complex inner(const MultiCoilKSpace& a, const MultiCoilKSpace& b) {
  require_same_shape(a, b);
  Complex s = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) s += std::conj(da[i]) * db[i];
  return s;
}

SamplingMask::SamplingMask(int nx, int ny, bool value)
    : nx_(nx), ny_(ny), bits_(checked_volume(nx, ny, 1), value ? 1 : 0) {}

SamplingMask::SamplingMask(int nx, int ny, std::vector<std::uint8_t> bits)
    : nx_(nx), ny_(ny), bits_(std::move(bits)) {
  if (bits_.size() != checked_volume(nx, ny, 1)) {
    throw DimensionError("mask payload length does not match extents");
  }
  for (auto& b : bits_) {
    if (b > 1) throw DimensionError("mask entries must be 0 or 1");
  }
}

std::size_t SamplingMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double SamplingMask::sampled_fraction() const {
  return bits_.empty() ? 0.0 : static_cast<double>(count()) / static_cast<double>(bits_.size());
}

MultiCoilKSpace apply_mask(const MultiCoilKSpace& y, const SamplingMask& mask) {
  if (!mask.fits(y)) throw DimensionError("mask extents do not match k-space");
  MultiCoilKSpace out(y.nx(), y.ny(), y.nc());
  for (int c = 0; c < y.nc(); ++c)
    for (int yy = 0; yy < y.ny(); ++yy)
      for (int x = 0; x < y.nx(); ++x)
        if (mask(x, yy)) out(x, yy, c) = y(x, yy, c);
  return out;
}

}  // namespace hicu
