#include "hicu/mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hicu/error.hpp"
#include "hicu/rng.hpp"

namespace hicu {

SamplingPattern parse_pattern(std::string_view name) {
  if (name == "S1" || name == "s1") return SamplingPattern::S1;
  if (name == "S2" || name == "s2") return SamplingPattern::S2;
  throw ConfigError("unknown sampling pattern '" + std::string(name) + "' (expected S1 or S2)");
}

namespace {

// Centred interval of `len` samples out of n, starting at n/2 - len/2.
std::pair<int, int> centred(int n, int len) {
  len = std::clamp(len, 0, n);
  const int start = n / 2 - len / 2;
  return {start, start + len};
}

// Indices of the `k` largest keys; ties broken by lower index.
std::vector<int> top_k(const std::vector<double>& keys, const std::vector<int>& candidates,
                       std::size_t k) {
  std::vector<int> order = candidates;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return keys[a] > keys[b]; });
  order.resize(std::min(k, order.size()));
  return order;
}

SamplingMask points(const MaskSpec& spec, int nx, int ny, std::size_t budget) {
  SamplingMask mask(nx, ny, false);
  const auto [x0, x1] = centred(nx, static_cast<int>(std::lround(spec.center_fraction * nx)));
  const auto [y0, y1] = centred(ny, static_cast<int>(std::lround(spec.center_fraction * ny)));
  const std::size_t center = static_cast<std::size_t>(x1 - x0) * (y1 - y0);
  if (center > budget) {
    throw ConfigError("fully sampled centre (" + std::to_string(center) +
                      " samples) exceeds the budget of " + std::to_string(budget));
  }
  RngStream rng(spec.seed, streams::kMask);
  std::vector<double> priority(static_cast<std::size_t>(nx) * ny);
  for (auto& p : priority) p = rng.uniform();
  std::vector<int> free;
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) {
      if (x >= x0 && x < x1 && y >= y0 && y < y1) {
        mask.set(x, y, true);
      } else {
        free.push_back(x + nx * y);
      }
    }
  for (int idx : top_k(priority, free, budget - center)) mask.set(idx % nx, idx / nx, true);
  return mask;
}

SamplingMask lines(const MaskSpec& spec, int nx, int ny, std::size_t budget) {
  SamplingMask mask(nx, ny, false);
  const auto [y0, y1] = centred(ny, static_cast<int>(std::lround(spec.center_fraction * ny)));
  const std::size_t center = static_cast<std::size_t>(y1 - y0);
  if (center > budget) {
    throw ConfigError("fully sampled centre (" + std::to_string(center) +
                      " lines) exceeds the budget of " + std::to_string(budget));
  }
  if (!(spec.density_width > 0.0)) throw ConfigError("density width must be positive");
  const double sigma = spec.density_width * ny;
  RngStream rng(spec.seed, streams::kMask);
  // Weighted sampling without replacement: largest log(u) / w wins.
  std::vector<double> key(ny);
  std::vector<int> free;
  for (int y = 0; y < ny; ++y) {
    const double w = std::pow(1.0 + std::abs(y - ny / 2) / sigma, -2.0);
    const double u = std::max(rng.uniform(), 1e-300);
    key[y] = std::log(u) / w;
    if (y < y0 || y >= y1) free.push_back(y);
  }
  std::vector<int> chosen = top_k(key, free, budget - center);
  for (int y = y0; y < y1; ++y) chosen.push_back(y);
  for (int y : chosen)
    for (int x = 0; x < nx; ++x) mask.set(x, y, true);
  return mask;
}

}  // namespace

SamplingMask make_mask(const MaskSpec& spec, int nx, int ny) {
  if (nx < 1 || ny < 1) throw ConfigError("mask extents must be positive");
  if (!(spec.acceleration >= 1.0) || !std::isfinite(spec.acceleration)) {
    throw ConfigError("acceleration must be a finite value >= 1");
  }
  if (!(spec.center_fraction >= 0.0 && spec.center_fraction <= 1.0)) {
    throw ConfigError("centre fraction must lie in [0, 1]");
  }
  if (spec.pattern == SamplingPattern::S1) {
    const auto total = static_cast<double>(nx) * ny;
    const auto budget = static_cast<std::size_t>(std::max(1.0, std::round(total / spec.acceleration)));
    return points(spec, nx, ny, budget);
  }
  const auto budget = static_cast<std::size_t>(std::max(1.0, std::round(ny / spec.acceleration)));
  return lines(spec, nx, ny, budget);
}

}  // namespace hicu
