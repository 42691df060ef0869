#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hicu/kspace.hpp"

namespace hicu {

/// Binary layout shared by the k-space file format and the external denoiser
/// protocol:
///
///   8-byte magic | u32 LE nx | u32 LE ny | u32 LE nc |
///   nx*ny*nc pairs of float32 LE (real, imag), x fastest, then y, then coil
///
/// Values are narrowed to float32 on encode; decoding widens them exactly.
namespace frame {

inline constexpr std::string_view kKSpaceMagic = "HICUKSP1";
inline constexpr std::string_view kDenoiserMagic = "HICUDNZ1";
inline constexpr std::string_view kMaskMagic = "HICUMSK1";
inline constexpr std::size_t kMagicBytes = 8;
inline constexpr std::size_t kComplexHeaderBytes = kMagicBytes + 3 * 4;

struct ComplexHeader {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  std::uint32_t nc = 0;
};

/// Parses the fixed-size header. Throws IoError on a wrong magic,
/// TruncationError on a short buffer, DimensionError on zero extents or a
/// payload size that cannot be represented.
ComplexHeader decode_complex_header(std::string_view magic, std::span<const std::uint8_t> bytes);

/// Payload length in bytes implied by a header.
std::size_t payload_bytes(const ComplexHeader& h);

std::vector<std::uint8_t> encode_complex(std::string_view magic, const MultiCoilKSpace& y);

/// Strict decode of a whole frame: a short buffer is a TruncationError and
/// trailing bytes are a DimensionError.
MultiCoilKSpace decode_complex(std::string_view magic, std::span<const std::uint8_t> bytes);

/// Decode just the payload for an already-parsed header.
MultiCoilKSpace decode_payload(const ComplexHeader& h, std::span<const std::uint8_t> payload);

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v);
std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset);

}  // namespace frame
}  // namespace hicu
