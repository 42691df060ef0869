#include "hicu/phantom.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hicu/error.hpp"
#include "hicu/fft.hpp"
#include "hicu/rng.hpp"

namespace hicu {

std::vector<Ellipse> default_ellipses() {
  constexpr double deg = std::numbers::pi / 180.0;
  return {
      {0.0, 0.0, 0.69, 0.92, 0.0, 1.0},
      {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8},
      {0.22, 0.0, 0.11, 0.31, -18.0 * deg, -0.2},
      {-0.22, 0.0, 0.16, 0.41, 18.0 * deg, -0.2},
      {0.0, 0.35, 0.21, 0.25, 0.0, 0.1},
      {0.0, 0.1, 0.046, 0.046, 0.0, 0.1},
      {0.0, -0.1, 0.046, 0.046, 0.0, 0.1},
      {-0.08, -0.605, 0.046, 0.023, 0.0, 0.1},
      {0.0, -0.606, 0.023, 0.023, 0.0, 0.1},
      {0.06, -0.605, 0.023, 0.046, 0.0, 0.1},
  };
}

PhantomSpec default_phantom_spec(int nx, int ny, int nc, std::uint64_t seed) {
  PhantomSpec spec;
  spec.nx = nx;
  spec.ny = ny;
  spec.nc = nc;
  spec.ellipses = default_ellipses();
  spec.seed = seed;
  return spec;
}

namespace {

void validate(const PhantomSpec& spec) {
  if (spec.nx < 3 || spec.ny < 3) throw ConfigError("phantom extents must be at least 3x3");
  if (spec.nc < 1) throw ConfigError("phantom needs at least one coil, got " + std::to_string(spec.nc));
  if (spec.ellipses.empty()) throw ConfigError("phantom needs at least one ellipse");
  for (const auto& e : spec.ellipses) {
    const double reach = std::max(e.ax, e.ay);
    if (!(e.ax > 0.0 && e.ay > 0.0) || std::abs(e.cx) + reach > 1.0 + 1e-12 ||
        std::abs(e.cy) + reach > 1.0 + 1e-12) {
      throw ConfigError("ellipse does not fit in the field of view");
    }
  }
  if (!(spec.coils.width > 0.0)) throw ConfigError("coil width must be positive");
}

// Normalised coordinate of pixel i on an n-point grid, DC pixel at n/2.
double coord(int i, int n) { return (i - n / 2) / (0.5 * n); }

}  // namespace

Phantom make_phantom(const PhantomSpec& spec) {
  validate(spec);
  const int nx = spec.nx;
  const int ny = spec.ny;
  Phantom out;
  out.object = MultiCoilKSpace(nx, ny, 1);
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) {
      const double u = coord(x, nx);
      const double v = coord(y, ny);
      double value = 0.0;
      for (const auto& e : spec.ellipses) {
        const double du = u - e.cx;
        const double dv = v - e.cy;
        const double cu = std::cos(e.angle) * du + std::sin(e.angle) * dv;
        const double cv = -std::sin(e.angle) * du + std::cos(e.angle) * dv;
        if ((cu * cu) / (e.ax * e.ax) + (cv * cv) / (e.ay * e.ay) <= 1.0) value += e.intensity;
      }
      out.object(x, y, 0) = value;
    }

  out.sensitivities = MultiCoilKSpace(nx, ny, spec.nc);
  const CoilModel& cm = spec.coils;
  for (int c = 0; c < spec.nc; ++c) {
    const double theta = 2.0 * std::numbers::pi * c / spec.nc;
    const double px = cm.ring_radius * std::cos(theta);
    const double py = cm.ring_radius * std::sin(theta);
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        if (cm.uniform) {
          out.sensitivities(x, y, c) = 1.0;
          continue;
        }
        const double u = coord(x, nx);
        const double v = coord(y, ny);
        const double d2 = (u - px) * (u - px) + (v - py) * (v - py);
        const double mag = std::exp(-d2 / (2.0 * cm.width * cm.width));
        const double phase = theta + cm.phase_ramp * (u * std::cos(theta) + v * std::sin(theta));
        out.sensitivities(x, y, c) = std::polar(mag, phase);
      }
  }

  out.coil_images = MultiCoilKSpace(nx, ny, spec.nc);
  for (int c = 0; c < spec.nc; ++c)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x)
        out.coil_images(x, y, c) = out.sensitivities(x, y, c) * out.object(x, y, 0);

  out.clean_kspace = to_kspace(out.coil_images);
  out.kspace = spec.noise_db ? add_noise(out.clean_kspace, *spec.noise_db, spec.seed)
                             : out.clean_kspace;
  return out;
}

MultiCoilKSpace add_noise(const MultiCoilKSpace& y, double snr_db, std::uint64_t seed) {
  if (std::isinf(snr_db) && snr_db > 0) return y;
  RngStream rng(seed, streams::kNoise);
  MultiCoilKSpace noise(y.nx(), y.ny(), y.nc());
  for (auto& v : noise.data()) v = rng.complex_normal();
  const double target = y.norm() * std::pow(10.0, -snr_db / 20.0);
  const double have = noise.norm();
  if (have > 0.0) noise *= target / have;
  return y + noise;
}

MultiCoilKSpace root_sum_of_squares(const MultiCoilKSpace& images) {
  MultiCoilKSpace out(images.nx(), images.ny(), 1);
  for (int y = 0; y < images.ny(); ++y)
    for (int x = 0; x < images.nx(); ++x) {
      double s = 0.0;
      for (int c = 0; c < images.nc(); ++c) s += std::norm(images(x, y, c));
      out(x, y, 0) = std::sqrt(s);
    }
  return out;
}

}  // namespace hicu
