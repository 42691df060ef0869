#pragma once

#include <cstdint>
#include <random>

#include "hicu/kspace.hpp"

namespace hicu {

/// Independent random streams derived from one run seed. Each consumer
/// (rSVD probes, JL mixing, mask draws, phantom noise) asks for its own
/// stream id so that changing one consumer never perturbs another.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Circularly-symmetric complex normal with E|z|^2 = 1.
  Complex complex_normal();

  RMatrix normal_matrix(Eigen::Index rows, Eigen::Index cols);
  CMatrix complex_normal_matrix(Eigen::Index rows, Eigen::Index cols);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

namespace streams {
inline constexpr std::uint64_t kRsvd = 1;
inline constexpr std::uint64_t kMixing = 2;
inline constexpr std::uint64_t kMask = 3;
inline constexpr std::uint64_t kNoise = 4;
}  // namespace streams

}  // namespace hicu
