#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hicu/convolution.hpp"
#include "hicu/denoise.hpp"
#include "hicu/lowrank.hpp"
#include "hicu/metrics.hpp"

namespace hicu {

/// One center-out stage of the schedule.
struct StageConfig {
  /// Fraction of each k-space extent covered by the stage region; 1 is the
  /// full valid-convolution region.
  double region_fraction = 1.0;
  /// JL compression dimension.
  int p = 32;
  /// Gradient steps per outer iteration.
  int g_steps = 10;
  bool denoise = false;
  int outer_iters = 10;
};

/// How the null-space basis is mixed into filters at every gradient step.
enum class Mixing {
  /// Fresh i.i.d. normal P per step, Q P / sqrt(p).
  Random,
  /// P = first p columns of the identity; with p = n - r the filters are Q.
  Identity,
};

struct SolverConfig {
  int rank = 30;
  /// Kernel extents; the coil count is taken from the data.
  int kernel_x = 3;
  int kernel_y = 3;
  std::vector<StageConfig> stages;
  std::uint64_t seed = 0;
  std::optional<double> max_wall_clock;
  /// Emit a trace record every this many gradient steps (and at the end).
  int trace_every = 1;
  int oversample = 10;
  int power_iterations = 2;
  Mixing mixing = Mixing::Random;
  /// Reduce a stage's p to n - r when it is larger instead of failing.
  bool clamp_p = true;
};

/// Two stages: centre quarter with p = 8, 5 steps, no denoiser, then the
/// full grid with p = 32, 10 steps, denoiser on; 10 outer iterations each.
std::vector<StageConfig> default_stages();
SolverConfig default_solver_config();

/// Parses "center=0.25,p=8,g=5,iters=10,denoise=off;full,p=32,g=10,iters=10,denoise=on".
/// Each stage starts with either `center=<fraction>` or `full`; omitted keys
/// keep StageConfig defaults. Throws ConfigError.
std::vector<StageConfig> parse_stages(const std::string& text);

/// Output positions for valid convolution inside the centred
/// ceil(fraction*nx) x ceil(fraction*ny) block of samples (the block shrunk
/// by the kernel half-extents). Throws ConfigError if nothing is left.
Region center_region(int nx, int ny, double fraction, const KernelSpec& k);

/// w at unsampled locations, z at sampled ones (exact copies).
MultiCoilKSpace data_consistency(const MultiCoilKSpace& w, const MultiCoilKSpace& z,
                                 const SamplingMask& m);

/// Everything visible after one gradient step, for instrumentation.
struct StepObservation {
  int stage = 0;
  int outer = 0;
  int inner = 0;
  Region region;
  /// Iterate after denoising and data consistency.
  const MultiCoilKSpace* w = nullptr;
  /// Iterate entering the step.
  const MultiCoilKSpace* w_before = nullptr;
  const NullspaceBasis* nullspace = nullptr;
  const FilterBank* filters = nullptr;
  LineSearchResult line_search;
  bool skipped = false;
};
using StepObserver = std::function<void(const StepObservation&)>;

struct SolverResult {
  MultiCoilKSpace y;
  std::vector<TraceRecord> trace;
  /// Stopped by the wall-clock budget.
  bool truncated = false;
  int steps = 0;
  int degenerate_steps = 0;
};

/// Alternating minimisation of ||H(Y) Q||_F^2 subject to M o Y = Z.
///
/// Every outer iteration estimates the signal subspace of H over the stage
/// region by randomized SVD, takes its Householder complement Q, then runs
/// g_steps projected gradient steps. Each step mixes Q into p filters,
/// takes the masked gradient, moves by the exact line-search step, applies
/// the denoiser when the stage enables it and re-imposes the measurements.
///
/// `reference`, when given, adds SNR to the trace. Throws ConfigError for an
/// invalid configuration and lets DenoiserError propagate.
SolverResult hicu_run(const MultiCoilKSpace& z, const SamplingMask& m, const SolverConfig& cfg,
                      Denoiser& denoiser, const MultiCoilKSpace* reference = nullptr,
                      const StepObserver& observer = {});

}  // namespace hicu
