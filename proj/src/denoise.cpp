#include "hicu/denoise.hpp"

#include <algorithm>

#include "hicu/error.hpp"
#include "hicu/fft.hpp"

namespace hicu {

MultiCoilKSpace Denoiser::denoise(const MultiCoilKSpace& w, const DenoiseContext& ctx) {
  if (passthrough()) return w;
  MultiCoilKSpace images = to_images(w);
  denoise_images(images, ctx);
  if (!images.same_shape(w)) throw DenoiserError(name() + " denoiser changed the array shape");
  MultiCoilKSpace out = to_kspace(images);
  if (!out.all_finite()) throw DenoiserError(name() + " denoiser produced non-finite values");
  return out;
}

SwtDenoiser::SwtDenoiser(SwtOptions opts) : opts_(opts) {
  if (!(opts_.threshold_scale >= 0.0)) throw ConfigError("SWT threshold scale must be >= 0");
  if (opts_.levels < 1) throw ConfigError("SWT levels must be >= 1");
}

void SwtDenoiser::denoise_images(MultiCoilKSpace& images, const DenoiseContext& ctx) {
  last_threshold_ = opts_.threshold_scale * std::max(0.0, ctx.eta);
  for (int c = 0; c < images.nc(); ++c) {
    auto plane = images.coil(c);
    const auto result = swt_soft_threshold(plane, images.nx(), images.ny(), last_threshold_,
                                           opts_.wavelet, opts_.levels);
    std::copy(result.begin(), result.end(), plane.begin());
  }
}

std::unique_ptr<Denoiser> make_denoiser(const std::string& spec, const SwtOptions& swt,
                                        std::chrono::milliseconds external_timeout) {
  if (spec == "identity") return std::make_unique<IdentityDenoiser>();
  if (spec == "swt") return std::make_unique<SwtDenoiser>(swt);
  constexpr std::string_view prefix = "external:";
  if (spec.starts_with(prefix)) {
    ExternalOptions opts{spec.substr(prefix.size()), external_timeout};
    if (opts.command.empty()) throw ConfigError("external denoiser needs a command");
    return std::make_unique<ExternalDenoiser>(std::move(opts));
  }
  throw ConfigError("unknown denoiser '" + spec + "' (expected identity, swt or external:<cmd>)");
}

}  // namespace hicu
