#pragma once

#include <cstdint>
#include <string_view>

#include "hicu/kspace.hpp"

namespace hicu {

/// S1: random 2-D point sampling with a fully sampled centre block.
/// S2: fully sampled phase-encode lines (constant y, all x) drawn with
///     variable density, plus fully sampled centre lines.
enum class SamplingPattern { S1, S2 };

SamplingPattern parse_pattern(std::string_view name);

struct MaskSpec {
  SamplingPattern pattern = SamplingPattern::S1;
  /// Acceleration; the sampled fraction is 1/R.
  double acceleration = 3.0;
  /// Side of the fully sampled centre block (S1) or fraction of centre lines
  /// (S2), relative to the array extent.
  double center_fraction = 24.0 / 384.0;
  /// S2 line density is proportional to (1 + |y - centre| / sigma)^-2 with
  /// sigma = density_width * ny.
  double density_width = 0.1;
  std::uint64_t seed = 0;
};

/// Exactly round(nx*ny/R) points for S1 and round(ny/R) lines for S2. The
/// centre is always kept; the remaining budget goes to the highest random
/// priorities, so samples are added or removed in priority order.
/// Throws ConfigError when the fully sampled centre alone exceeds the budget.
SamplingMask make_mask(const MaskSpec& spec, int nx, int ny);

}  // namespace hicu
