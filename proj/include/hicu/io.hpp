#pragma once

#include <filesystem>

#include "hicu/kspace.hpp"

namespace hicu {

/// K-space file: "HICUKSP1", u32 LE nx, ny, nc, then float32 LE (re, im)
/// pairs with x fastest, then y, then coil. Values are stored as float32.
void write_kspace(const std::filesystem::path& path, const MultiCoilKSpace& y);
MultiCoilKSpace read_kspace(const std::filesystem::path& path);

/// Mask file: "HICUMSK1", u32 LE nx, ny, then nx*ny bytes in {0, 1}.
void write_mask(const std::filesystem::path& path, const SamplingMask& m);
SamplingMask read_mask(const std::filesystem::path& path);

}  // namespace hicu
