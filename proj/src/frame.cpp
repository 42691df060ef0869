#include "hicu/frame.hpp"

#include <bit>
#include <cstring>
#include <limits>
#include <string>

#include "hicu/error.hpp"

namespace hicu::frame {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  return v;
}

ComplexHeader decode_complex_header(std::string_view magic, std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagicBytes) throw TruncationError("frame shorter than its magic");
  if (std::memcmp(bytes.data(), magic.data(), kMagicBytes) != 0) {
    throw IoError("bad magic, expected '" + std::string(magic) + "'");
  }
  if (bytes.size() < kComplexHeaderBytes) throw TruncationError("truncated frame header");
  ComplexHeader h{get_u32(bytes, 8), get_u32(bytes, 12), get_u32(bytes, 16)};
  if (h.nx == 0 || h.ny == 0 || h.nc == 0) throw DimensionError("frame has a zero extent");
  payload_bytes(h);
  return h;
}

std::size_t payload_bytes(const ComplexHeader& h) {
  // 8 bytes per complex sample; reject anything that would not fit in memory
  // indexing or in the int extents used by MultiCoilKSpace.
  constexpr std::uint64_t kMax = std::numeric_limits<std::int32_t>::max();
  const std::uint64_t samples = static_cast<std::uint64_t>(h.nx) * h.ny * h.nc;
  if (h.nx > kMax || h.ny > kMax || h.nc > kMax || samples > (kMax >> 3)) {
    throw DimensionError("frame extents overflow");
  }
  return static_cast<std::size_t>(samples * 8);
}

std::vector<std::uint8_t> encode_complex(std::string_view magic, const MultiCoilKSpace& y) {
  std::vector<std::uint8_t> out(kComplexHeaderBytes + y.size() * 8);
  const auto store = [&out](std::size_t offset, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out[offset + i] = static_cast<std::uint8_t>(v >> (8 * i));
  };
  std::memcpy(out.data(), magic.data(), kMagicBytes);
  store(8, static_cast<std::uint32_t>(y.nx()));
  store(12, static_cast<std::uint32_t>(y.ny()));
  store(16, static_cast<std::uint32_t>(y.nc()));
  std::size_t offset = kComplexHeaderBytes;
  for (const Complex& v : y.data()) {
    store(offset, std::bit_cast<std::uint32_t>(static_cast<float>(v.real())));
    store(offset + 4, std::bit_cast<std::uint32_t>(static_cast<float>(v.imag())));
    offset += 8;
  }
  return out;
}

MultiCoilKSpace decode_payload(const ComplexHeader& h, std::span<const std::uint8_t> payload) {
  const std::size_t need = payload_bytes(h);
  if (payload.size() < need) {
    throw TruncationError("payload holds " + std::to_string(payload.size()) + " bytes, header needs " +
                          std::to_string(need));
  }
  if (payload.size() > need) {
    throw DimensionError("payload holds " + std::to_string(payload.size()) +
                         " bytes, more than the header's " + std::to_string(need));
  }
  std::vector<Complex> data(need / 8);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const float re = std::bit_cast<float>(get_u32(payload, 8 * i));
    const float im = std::bit_cast<float>(get_u32(payload, 8 * i + 4));
    data[i] = Complex(re, im);
  }
  return MultiCoilKSpace(static_cast<int>(h.nx), static_cast<int>(h.ny), static_cast<int>(h.nc),
                         std::move(data));
}

MultiCoilKSpace decode_complex(std::string_view magic, std::span<const std::uint8_t> bytes) {
  const ComplexHeader h = decode_complex_header(magic, bytes);
  return decode_payload(h, bytes.subspan(kComplexHeaderBytes));
}

}  // namespace hicu::frame
