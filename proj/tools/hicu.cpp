// Command-line front end: phantom generation, mask generation,
// reconstruction and evaluation.
//
// Exit codes: 0 success, 1 failed check, 2 usage or configuration error,
// 3 denoiser failure, 4 I/O error.

#include <chrono>
#include <cstring>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "hicu/error.hpp"
#include "hicu/io.hpp"
#include "hicu/mask.hpp"
#include "hicu/metrics.hpp"
#include "hicu/phantom.hpp"
#include "hicu/solver.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit : int { kOk = 0, kCheckFailed = 1, kConfig = 2, kDenoiser = 3, kIo = 4 };

struct PhantomArgs {
  int nx = 64;
  int ny = 64;
  int nc = 4;
  std::optional<double> noise_db;
  std::uint64_t seed = 0;
  std::string out;
  std::string images;
  std::string clean_out;
};

struct MaskArgs {
  int nx = 64;
  int ny = 64;
  std::string pattern = "S1";
  double accel = 3.0;
  double center_fraction = 24.0 / 384.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct ReconArgs {
  std::string kspace;
  std::string mask;
  std::string pattern = "S1";
  double accel = 3.0;
  double center_fraction = 24.0 / 384.0;
  int rank = 30;
  int kernel = 3;
  std::string stages = "center=0.25,p=8,g=5,iters=10,denoise=off;full,p=32,g=10,iters=10,denoise=on";
  std::string denoiser = "identity";
  double swt_scale = 0.1;
  int swt_levels = 2;
  std::string swt_wavelet = "haar";
  double denoiser_timeout = 30.0;
  std::optional<double> budget_seconds;
  std::uint64_t seed = 0;
  std::string out;
  std::string trace;
  std::string mask_out;
  std::string reference;
  std::string manifest_out;
};

struct EvalArgs {
  std::string estimate;
  std::string reference;
  std::string trace;
  bool check_dc = false;
  std::string mask;
  std::string measured;
};

void require_file(const std::string& path, const char* what) {
  if (!path.empty() && !fs::is_regular_file(path)) {
    throw hicu::IoError(std::string(what) + " '" + path + "' does not exist");
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hicu::IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw hicu::IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw hicu::IoError("error writing '" + path + "'");
}

std::string format_db(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

int run_phantom(const PhantomArgs& a) {
  hicu::PhantomSpec spec = hicu::default_phantom_spec(a.nx, a.ny, a.nc, a.seed);
  spec.noise_db = a.noise_db;
  const hicu::Phantom ph = hicu::make_phantom(spec);
  hicu::write_kspace(a.out, ph.kspace);
  hicu::write_kspace(a.images.empty() ? a.out + ".img" : a.images, ph.coil_images);
  if (!a.clean_out.empty()) hicu::write_kspace(a.clean_out, ph.clean_kspace);
  return kOk;
}

int run_mask(const MaskArgs& a) {
  hicu::MaskSpec spec{hicu::parse_pattern(a.pattern), a.accel, a.center_fraction, 0.1, a.seed};
  hicu::write_mask(a.out, hicu::make_mask(spec, a.nx, a.ny));
  return kOk;
}

int run_recon(const ReconArgs& a, const CLI::App& cmd) {
  require_file(a.kspace, "k-space file");
  require_file(a.mask, "mask file");
  require_file(a.reference, "reference file");

  hicu::SolverConfig cfg;
  cfg.rank = a.rank;
  cfg.kernel_x = cfg.kernel_y = a.kernel;
  cfg.stages = hicu::parse_stages(a.stages);
  cfg.seed = a.seed;
  cfg.max_wall_clock = a.budget_seconds;

  const hicu::SwtOptions swt{hicu::parse_wavelet(a.swt_wavelet), a.swt_levels, a.swt_scale};
  if (!(a.denoiser_timeout > 0.0)) throw hicu::ConfigError("denoiser timeout must be positive");
  const auto timeout = std::chrono::milliseconds(static_cast<long long>(a.denoiser_timeout * 1000));

  const hicu::MultiCoilKSpace input = hicu::read_kspace(a.kspace);
  hicu::SamplingMask mask;
  if (!a.mask.empty()) {
    mask = hicu::read_mask(a.mask);
  } else {
    const hicu::MaskSpec spec{hicu::parse_pattern(a.pattern), a.accel, a.center_fraction, 0.1, a.seed};
    mask = hicu::make_mask(spec, input.nx(), input.ny());
  }
  if (!mask.fits(input)) throw hicu::DimensionError("mask extents do not match the k-space");
  std::optional<hicu::MultiCoilKSpace> reference;
  if (!a.reference.empty()) reference = hicu::read_kspace(a.reference);

  if (!a.manifest_out.empty()) write_text(a.manifest_out, "[recon]\n" + cmd.config_to_str(true, false));

  const hicu::MultiCoilKSpace z = hicu::apply_mask(input, mask);
  auto denoiser = hicu::make_denoiser(a.denoiser, swt, timeout);
  const hicu::SolverResult result =
      hicu::hicu_run(z, mask, cfg, *denoiser, reference ? &*reference : nullptr);
  if (result.truncated) spdlog::warn("wall-clock budget reached after {} steps", result.steps);

  hicu::write_kspace(a.out, result.y);
  if (!a.trace.empty()) write_text(a.trace, hicu::trace_to_csv(result.trace));
  if (!a.mask_out.empty()) hicu::write_mask(a.mask_out, mask);
  return kOk;
}

int run_eval(const EvalArgs& a) {
  require_file(a.estimate, "estimate file");
  require_file(a.reference, "reference file");
  require_file(a.trace, "trace file");
  require_file(a.mask, "mask file");
  require_file(a.measured, "measured file");

  const hicu::MultiCoilKSpace est = hicu::read_kspace(a.estimate);
  const hicu::MultiCoilKSpace ref = hicu::read_kspace(a.reference);
  const hicu::SnrReport rep = hicu::snr_report(est, ref, a.reference);
  std::cout << "snr_db: " << format_db(rep.snr_db) << "\n";
  std::cout << "nmse: " << rep.nmse << "\n";

  if (!a.trace.empty()) {
    const auto records = hicu::trace_from_csv(read_text(a.trace));
    const hicu::TraceSummary s = hicu::summarize_trace(records);
    std::cout << "peak_snr_db: " << format_db(s.peak_snr_db) << "\n";
    std::cout << "time_to_peak_s: " << s.time_to_peak << "\n";
    std::cout << "final_snr_db: " << format_db(s.final_snr_db) << "\n";
  }

  if (a.check_dc) {
    if (a.mask.empty()) throw hicu::ConfigError("--check-dc needs --mask");
    const hicu::SamplingMask mask = hicu::read_mask(a.mask);
    const hicu::MultiCoilKSpace measured = a.measured.empty() ? ref : hicu::read_kspace(a.measured);
    if (!mask.fits(est) || !measured.same_shape(est)) {
      throw hicu::DimensionError("data-consistency inputs differ in shape");
    }
    // Measurements and estimate agree bitwise wherever the mask is set.
    const hicu::MultiCoilKSpace lhs = hicu::apply_mask(est, mask);
    const hicu::MultiCoilKSpace rhs = hicu::apply_mask(measured, mask);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      if (std::memcmp(&lhs.data()[i], &rhs.data()[i], sizeof(hicu::Complex)) != 0) ++mismatches;
    }
    std::cout << "data_consistency: " << (mismatches == 0 ? "ok" : "FAILED") << " (" << mismatches
              << " mismatches)\n";
    if (mismatches != 0) return kCheckFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibrationless parallel-MRI reconstruction by structured low-rank completion"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read subcommand options from a manifest written by --manifest-out");
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log solver progress");

  PhantomArgs pa;
  auto* phantom = app.add_subcommand("phantom", "Write a synthetic multi-coil phantom");
  phantom->add_option("--nx", pa.nx, "Samples along x")->check(CLI::PositiveNumber);
  phantom->add_option("--ny", pa.ny, "Samples along y")->check(CLI::PositiveNumber);
  phantom->add_option("--nc", pa.nc, "Coil count")->check(CLI::PositiveNumber);
  phantom->add_option("--noise-db", pa.noise_db, "k-space SNR of added complex Gaussian noise");
  phantom->add_option("--seed", pa.seed, "Noise seed");
  phantom->add_option("--out", pa.out, "Output k-space file")->required();
  phantom->add_option("--images", pa.images, "Coil image output (default: <out>.img)");
  phantom->add_option("--clean-out", pa.clean_out, "Noiseless k-space output");

  MaskArgs ma;
  auto* mask = app.add_subcommand("mask", "Write a sampling mask");
  mask->add_option("--nx", ma.nx)->check(CLI::PositiveNumber);
  mask->add_option("--ny", ma.ny)->check(CLI::PositiveNumber);
  mask->add_option("--pattern", ma.pattern, "S1 (random points) or S2 (variable-density lines)");
  mask->add_option("--accel", ma.accel, "Acceleration R");
  mask->add_option("--center-fraction", ma.center_fraction, "Fully sampled centre size");
  mask->add_option("--seed", ma.seed);
  mask->add_option("--out", ma.out, "Output mask file")->required();

  ReconArgs ra;
  auto* recon = app.add_subcommand("recon", "Reconstruct undersampled k-space");
  recon->option_defaults()->always_capture_default();
  recon->add_option("--kspace", ra.kspace, "Input k-space (undersampled or fully sampled)")->required();
  recon->add_option("--mask", ra.mask, "Sampling mask file");
  recon->add_option("--pattern", ra.pattern, "Generate an S1 or S2 mask when --mask is absent");
  recon->add_option("--accel", ra.accel, "Acceleration for the generated mask");
  recon->add_option("--center-fraction", ra.center_fraction, "Centre size for the generated mask");
  recon->add_option("--rank", ra.rank, "Rank of the convolution matrix");
  recon->add_option("--kernel", ra.kernel, "Odd in-plane kernel extent");
  recon->add_option("--stages", ra.stages, "Centre-out stage schedule");
  recon->add_option("--denoiser", ra.denoiser, "identity, swt or external:<command>");
  recon->add_option("--swt-scale", ra.swt_scale, "SWT threshold per unit step size");
  recon->add_option("--swt-levels", ra.swt_levels, "SWT decomposition levels");
  recon->add_option("--swt-wavelet", ra.swt_wavelet, "haar or db2");
  recon->add_option("--denoiser-timeout", ra.denoiser_timeout, "External denoiser timeout (s)");
  recon->add_option("--budget-seconds", ra.budget_seconds, "Wall-clock budget");
  recon->add_option("--seed", ra.seed, "Seed for masks, sketches and mixing");
  recon->add_option("--out", ra.out, "Reconstructed k-space output")->required();
  recon->add_option("--trace", ra.trace, "Trace CSV output");
  recon->add_option("--mask-out", ra.mask_out, "Write the mask that was used");
  recon->add_option("--reference", ra.reference, "Fully sampled k-space for SNR in the trace");
  recon->add_option("--manifest-out", ra.manifest_out, "Write the run configuration")
      ->configurable(false);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Compare an estimate with a reference");
  eval->add_option("--estimate", ea.estimate)->required();
  eval->add_option("--reference", ea.reference)->required();
  eval->add_option("--trace", ea.trace, "Trace CSV to summarise");
  eval->add_flag("--check-dc", ea.check_dc, "Verify bitwise data consistency");
  eval->add_option("--mask", ea.mask, "Mask for --check-dc");
  eval->add_option("--measured", ea.measured, "Measurements for --check-dc (default: reference)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);
  spdlog::set_pattern("%l: %v");
  try {
    if (phantom->parsed()) return run_phantom(pa);
    if (mask->parsed()) return run_mask(ma);
    if (recon->parsed()) return run_recon(ra, *recon);
    if (eval->parsed()) return run_eval(ea);
  } catch (const hicu::DenoiserError& e) {
    std::cerr << "denoiser error: " << e.what() << "\n";
    return kDenoiser;
  } catch (const hicu::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const hicu::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
