#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hicu/kspace.hpp"

namespace hicu {

struct Ellipse {
  /// Centre and semi-axes in normalised coordinates, field of view [-1, 1]^2.
  double cx = 0.0;
  double cy = 0.0;
  double ax = 0.5;
  double ay = 0.5;
  /// Rotation in radians.
  double angle = 0.0;
  /// Added to the image inside the ellipse.
  double intensity = 1.0;
};

/// Gaussian bump coil sensitivities placed evenly on a ring around the
/// field of view, each with its own smooth linear phase ramp.
struct CoilModel {
  double ring_radius = 1.2;
  /// Gaussian width in normalised units; larger is smoother.
  double width = 0.9;
  /// Peak phase excursion of the linear ramp in radians.
  double phase_ramp = 0.6;
  /// Uniform unit sensitivity for every coil (overrides the bumps).
  bool uniform = false;
};

struct PhantomSpec {
  int nx = 64;
  int ny = 64;
  int nc = 4;
  std::vector<Ellipse> ellipses;
  CoilModel coils;
  /// Signal-to-noise ratio in dB of additive complex Gaussian k-space noise,
  /// relative to the noiseless k-space norm. Absent means noiseless.
  std::optional<double> noise_db;
  std::uint64_t seed = 0;
};

/// A modified Shepp-Logan style ellipse set inside [-1, 1]^2.
std::vector<Ellipse> default_ellipses();

/// Default phantom with the ellipse set above.
PhantomSpec default_phantom_spec(int nx, int ny, int nc, std::uint64_t seed = 0);

struct Phantom {
  /// Fully sampled k-space (noisy if noise was requested).
  MultiCoilKSpace kspace;
  /// Noiseless coil images, sensitivity_c * object.
  MultiCoilKSpace coil_images;
  /// Noiseless k-space.
  MultiCoilKSpace clean_kspace;
  /// Coil sensitivities, same layout as coil_images.
  MultiCoilKSpace sensitivities;
  /// Real object image, nx x ny x 1.
  MultiCoilKSpace object;
};

/// Throws ConfigError for invalid geometry or coil counts.
Phantom make_phantom(const PhantomSpec& spec);

/// Add complex Gaussian noise so that ||noise|| / ||y|| = 10^(-snr_db/20).
MultiCoilKSpace add_noise(const MultiCoilKSpace& y, double snr_db, std::uint64_t seed);

/// Root-sum-of-squares coil combination of coil images, nx x ny x 1.
MultiCoilKSpace root_sum_of_squares(const MultiCoilKSpace& images);

}  // namespace hicu
