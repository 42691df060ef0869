#include "hicu/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "hicu/error.hpp"
#include "hicu/frame.hpp"

namespace hicu {

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return bytes;
}

void dump(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const TruncationError& e) {
    throw TruncationError(path.string() + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(path.string() + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace

void write_kspace(const std::filesystem::path& path, const MultiCoilKSpace& y) {
  dump(path, frame::encode_complex(frame::kKSpaceMagic, y));
}

MultiCoilKSpace read_kspace(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  return with_path(path, [&] { return frame::decode_complex(frame::kKSpaceMagic, bytes); });
}

void write_mask(const std::filesystem::path& path, const SamplingMask& m) {
  std::vector<std::uint8_t> bytes(frame::kMaskMagic.begin(), frame::kMaskMagic.end());
  frame::put_u32(bytes, static_cast<std::uint32_t>(m.nx()));
  frame::put_u32(bytes, static_cast<std::uint32_t>(m.ny()));
  bytes.insert(bytes.end(), m.bits().begin(), m.bits().end());
  dump(path, bytes);
}

SamplingMask read_mask(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  return with_path(path, [&] {
    constexpr std::size_t header = frame::kMagicBytes + 8;
    if (bytes.size() < frame::kMagicBytes ||
        std::memcmp(bytes.data(), frame::kMaskMagic.data(), frame::kMagicBytes) != 0) {
      throw IoError("bad magic, expected 'HICUMSK1'");
    }
    if (bytes.size() < header) throw TruncationError("truncated mask header");
    const std::uint32_t nx = frame::get_u32(bytes, 8);
    const std::uint32_t ny = frame::get_u32(bytes, 12);
    const std::uint64_t count = static_cast<std::uint64_t>(nx) * ny;
    if (nx == 0 || ny == 0 || nx > INT32_MAX || ny > INT32_MAX || count > (1ull << 40)) {
      throw DimensionError("mask extents overflow or are zero");
    }
    const std::size_t payload = bytes.size() - header;
    if (payload < count) throw TruncationError("truncated mask payload");
    if (payload > count) throw DimensionError("mask payload longer than its header");
    std::vector<std::uint8_t> bits(bytes.begin() + header, bytes.end());
    return SamplingMask(static_cast<int>(nx), static_cast<int>(ny), std::move(bits));
  });
}

}  // namespace hicu
