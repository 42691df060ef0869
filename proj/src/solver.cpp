#include "hicu/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <spdlog/spdlog.h>

#include "hicu/error.hpp"

namespace hicu {

std::vector<StageConfig> default_stages() {
  return {
      StageConfig{0.25, 8, 5, false, 10},
      StageConfig{1.0, 32, 10, true, 10},
  };
}

SolverConfig default_solver_config() {
  SolverConfig cfg;
  cfg.stages = default_stages();
  return cfg;
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("stage key '" + key + "' expects a number, got '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) {
    throw ConfigError("stage key '" + key + "' expects an integer, got '" + v + "'");
  }
  return static_cast<int>(d);
}

}  // namespace

std::vector<StageConfig> parse_stages(const std::string& text) {
  std::vector<StageConfig> stages;
  std::istringstream in(text);
  std::string chunk;
  while (std::getline(in, chunk, ';')) {
    chunk = trim(chunk);
    if (chunk.empty()) continue;
    StageConfig st;
    std::istringstream items(chunk);
    std::string item;
    bool first = true;
    while (std::getline(items, item, ',')) {
      item = trim(item);
      const auto eq = item.find('=');
      const std::string key = trim(item.substr(0, eq));
      const std::string val = eq == std::string::npos ? std::string() : trim(item.substr(eq + 1));
      if (first) {
        first = false;
        if (key == "full" && eq == std::string::npos) {
          st.region_fraction = 1.0;
          continue;
        }
        if (key == "center") {
          st.region_fraction = to_double(key, val);
          continue;
        }
        throw ConfigError("stage must start with 'center=<fraction>' or 'full', got '" + item + "'");
      }
      if (key == "p") {
        st.p = to_int(key, val);
      } else if (key == "g") {
        st.g_steps = to_int(key, val);
      } else if (key == "iters") {
        st.outer_iters = to_int(key, val);
      } else if (key == "denoise") {
        if (val == "on") {
          st.denoise = true;
        } else if (val == "off") {
          st.denoise = false;
        } else {
          throw ConfigError("denoise expects on or off, got '" + val + "'");
        }
      } else {
        throw ConfigError("unknown stage key '" + key + "'");
      }
    }
    stages.push_back(st);
  }
  if (stages.empty()) throw ConfigError("stage list is empty");
  return stages;
}

Region center_region(int nx, int ny, double fraction, const KernelSpec& k) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("region fraction must lie in (0, 1]");
  const int bx = std::min(nx, static_cast<int>(std::ceil(fraction * nx - 1e-9)));
  const int by = std::min(ny, static_cast<int>(std::ceil(fraction * ny - 1e-9)));
  const int sx = nx / 2 - bx / 2;
  const int sy = ny / 2 - by / 2;
  Region r{sx + k.half_x(), sy + k.half_y(), bx - 2 * k.half_x(), by - 2 * k.half_y()};
  if (r.width < 1 || r.height < 1) {
    throw ConfigError("centre region " + std::to_string(bx) + "x" + std::to_string(by) +
                      " cannot hold a " + std::to_string(k.kx) + "x" + std::to_string(k.ky) +
                      " kernel");
  }
  return r;
}

MultiCoilKSpace data_consistency(const MultiCoilKSpace& w, const MultiCoilKSpace& z,
                                 const SamplingMask& m) {
  if (!w.same_shape(z)) throw DimensionError("iterate and measurements differ in shape");
  if (!m.fits(w)) throw DimensionError("mask extents do not match k-space");
  MultiCoilKSpace out = w;
  for (int c = 0; c < w.nc(); ++c)
    for (int y = 0; y < w.ny(); ++y)
      for (int x = 0; x < w.nx(); ++x)
        if (m(x, y)) out(x, y, c) = z(x, y, c);
  return out;
}

namespace {

struct PreparedStage {
  StageConfig cfg;
  Region region;
  int p = 0;
};

std::vector<PreparedStage> prepare(const MultiCoilKSpace& z, const SolverConfig& cfg,
                                   const KernelSpec& k) {
  const int n = k.length();
  if (cfg.rank < 0 || cfg.rank >= n) {
    throw ConfigError("rank " + std::to_string(cfg.rank) + " must lie in [0, " +
                      std::to_string(n - 1) + "] for filter length " + std::to_string(n));
  }
  if (cfg.stages.empty()) throw ConfigError("solver needs at least one stage");
  if (cfg.trace_every < 1) throw ConfigError("trace interval must be >= 1");
  std::vector<PreparedStage> out;
  double previous = 0.0;
  for (std::size_t s = 0; s < cfg.stages.size(); ++s) {
    const StageConfig& st = cfg.stages[s];
    if (st.g_steps < 1) throw ConfigError("stage gradient steps must be >= 1");
    if (st.outer_iters < 0) throw ConfigError("stage outer iterations must be >= 0");
    if (st.p < 1) throw ConfigError("stage compression dimension must be >= 1");
    if (st.region_fraction < previous) {
      throw ConfigError("stage regions must be nested (non-decreasing fractions)");
    }
    previous = st.region_fraction;
    PreparedStage ps{st, center_region(z.nx(), z.ny(), st.region_fraction, k), st.p};
    if (ps.region.rows() < cfg.rank) {
      throw ConfigError("stage region has fewer rows than the rank");
    }
    const int dim = n - cfg.rank;
    if (ps.p > dim) {
      if (!cfg.clamp_p) {
        throw ConfigError("p=" + std::to_string(ps.p) + " exceeds null-space dimension " +
                          std::to_string(dim));
      }
      spdlog::info("stage {}: p={} exceeds null-space dimension {}, using {}", s + 1, ps.p, dim,
                   dim);
      ps.p = dim;
    }
    out.push_back(ps);
  }
  return out;
}

}  // namespace

SolverResult hicu_run(const MultiCoilKSpace& z, const SamplingMask& m, const SolverConfig& cfg,
                      Denoiser& denoiser, const MultiCoilKSpace* reference,
                      const StepObserver& observer) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  if (!m.fits(z)) throw DimensionError("mask extents do not match k-space");
  if (reference && !reference->same_shape(z)) throw DimensionError("reference shape mismatch");
  if (!z.all_finite()) throw ConfigError("measurements contain non-finite values");
  const KernelSpec k{cfg.kernel_x, cfg.kernel_y, z.nc()};
  k.validate();
  const std::vector<PreparedStage> stages = prepare(z, cfg, k);
  const RsvdOptions rsvd{cfg.rank, cfg.oversample, cfg.power_iterations};

  RngStream rsvd_rng(cfg.seed, streams::kRsvd);
  RngStream mixing_rng(cfg.seed, streams::kMixing);

  SolverResult result;
  // Measurements are exact; anything the caller left at unsampled positions
  // is discarded so that Y starts zero-filled.
  MultiCoilKSpace y = apply_mask(z, m);
  const auto snr = [&](const MultiCoilKSpace& w) {
    return reference ? snr_db(w, *reference) : std::numeric_limits<double>::quiet_NaN();
  };
  result.trace.push_back({elapsed(), 0, 0, std::numeric_limits<double>::quiet_NaN(), 0.0, snr(y)});

  int outer = 0;
  bool stop = false;
  for (std::size_t s = 0; s < stages.size() && !stop; ++s) {
    const PreparedStage& st = stages[s];
    for (int it = 0; it < st.cfg.outer_iters && !stop; ++it) {
      ++outer;
      const ConvolutionOperator op(y, k, st.region);
      const SignalSubspace v = rsvd_right_vectors(op, rsvd, rsvd_rng);
      const NullspaceBasis q = householder_complement(v);

      MultiCoilKSpace w = y;
      for (int j = 1; j <= st.cfg.g_steps; ++j) {
        const FilterBank f = cfg.mixing == Mixing::Random
                                 ? jl_compress(q, st.p, mixing_rng)
                                 : mix_nullspace(q, RMatrix::Identity(q.dimension(), st.p));
        const CMatrix residuals = apply_filters(w, f, k, st.region);
        const MultiCoilKSpace g = cost_gradient(w, residuals, f, k, st.region, m);
        const LineSearchResult ls = exact_line_search(residuals, g, f, k, st.region);
        ++result.steps;

        StepObservation obs{static_cast<int>(s), outer, j, st.region, nullptr, nullptr, &q, &f, ls,
                            false};
        MultiCoilKSpace before = observer ? w : MultiCoilKSpace();
        if (ls.degenerate) {
          ++result.degenerate_steps;
          spdlog::warn("outer {} step {}: gradient direction is invisible to the filters, skipped",
                       outer, j);
        }
        if (ls.eta > 0.0) {
          w.axpy(-ls.eta, g);
          if (st.cfg.denoise) {
            w = denoiser.denoise(w, DenoiseContext{ls.eta, static_cast<int>(s), outer, j});
          }
          w = data_consistency(w, z, m);
        } else {
          obs.skipped = true;
        }

        if (observer) {
          obs.w = &w;
          obs.w_before = &before;
          observer(obs);
        }
        const bool over_budget = cfg.max_wall_clock && elapsed() > *cfg.max_wall_clock;
        const bool last = j == st.cfg.g_steps && it + 1 == st.cfg.outer_iters && s + 1 == stages.size();
        if (result.steps % cfg.trace_every == 0 || over_budget || last) {
          result.trace.push_back({elapsed(), outer, j, ls.cost_after, ls.eta, snr(w)});
        }
        if (over_budget) {
          result.truncated = true;
          stop = true;
          break;
        }
      }
      y = std::move(w);
    }
  }
  if (result.degenerate_steps > 0) {
    spdlog::warn("{} of {} gradient steps were degenerate", result.degenerate_steps, result.steps);
  }
  result.y = std::move(y);
  return result;
}

}  // namespace hicu
