#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>

#include "hicu/kspace.hpp"
#include "hicu/wavelet.hpp"

namespace hicu {

/// Where in the solver a denoise call happens.
struct DenoiseContext {
  /// Step size of the line search that preceded this call.
  double eta = 0.0;
  int stage = 0;
  int outer = 0;
  int inner = 0;
};

/// Plug-in replacement for the proximal step of the image prior.
///
/// Input and output are multi-coil k-space. Image-domain denoisers see the
/// per-coil centred orthonormal inverse DFT of the input and their result is
/// transformed back.
class Denoiser {
 public:
  virtual ~Denoiser() = default;

  /// Throws DenoiserError if the result is not finite.
  MultiCoilKSpace denoise(const MultiCoilKSpace& w, const DenoiseContext& ctx);

  virtual std::string name() const = 0;

 protected:
  /// Denoise coil images in place.
  virtual void denoise_images(MultiCoilKSpace& images, const DenoiseContext& ctx) = 0;
  /// Identity skips both transforms so the output is bitwise the input.
  virtual bool passthrough() const { return false; }
};

class IdentityDenoiser final : public Denoiser {
 public:
  std::string name() const override { return "identity"; }

 protected:
  void denoise_images(MultiCoilKSpace&, const DenoiseContext&) override {}
  bool passthrough() const override { return true; }
};

struct SwtOptions {
  Wavelet wavelet = Wavelet::Haar;
  int levels = 2;
  /// Threshold applied to detail coefficients is threshold_scale * eta.
  double threshold_scale = 0.0;
};

/// Soft thresholding in an undecimated wavelet domain, coil by coil.
class SwtDenoiser final : public Denoiser {
 public:
  explicit SwtDenoiser(SwtOptions opts);

  std::string name() const override { return "swt"; }
  const SwtOptions& options() const { return opts_; }
  /// Threshold used by the most recent call (instrumentation).
  double last_threshold() const { return last_threshold_; }

 protected:
  void denoise_images(MultiCoilKSpace& images, const DenoiseContext& ctx) override;

 private:
  SwtOptions opts_;
  double last_threshold_ = 0.0;
};

/// Image-domain callback, mostly for tests and embedding.
class FunctionDenoiser final : public Denoiser {
 public:
  using Fn = std::function<void(MultiCoilKSpace& images, const DenoiseContext& ctx)>;
  FunctionDenoiser(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  std::string name() const override { return name_; }

 protected:
  void denoise_images(MultiCoilKSpace& images, const DenoiseContext& ctx) override {
    fn_(images, ctx);
  }

 private:
  std::string name_;
  Fn fn_;
};

struct ExternalOptions {
  /// Shell command line of the denoiser process.
  std::string command;
  std::chrono::milliseconds timeout{30'000};
};

/// Client for a denoiser running as a child process, speaking the
/// HICUDNZ1 frame protocol over the child's stdin/stdout. One request is in
/// flight at a time. The child is started on construction and is sent EOF
/// and reaped on destruction.
class ExternalDenoiser final : public Denoiser {
 public:
  /// Throws DenoiserError if the command's program cannot be resolved or the
  /// process cannot be started.
  explicit ExternalDenoiser(ExternalOptions opts);
  ~ExternalDenoiser() override;
  ExternalDenoiser(const ExternalDenoiser&) = delete;
  ExternalDenoiser& operator=(const ExternalDenoiser&) = delete;

  std::string name() const override { return "external"; }

 protected:
  void denoise_images(MultiCoilKSpace& images, const DenoiseContext& ctx) override;

 private:
  void write_all(std::span<const std::uint8_t> bytes);
  void read_exact(std::span<std::uint8_t> bytes);
  void shutdown();

  ExternalOptions opts_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
};

/// Parses "identity", "swt" or "external:<command>".
std::unique_ptr<Denoiser> make_denoiser(const std::string& spec, const SwtOptions& swt,
                                        std::chrono::milliseconds external_timeout);

}  // namespace hicu
