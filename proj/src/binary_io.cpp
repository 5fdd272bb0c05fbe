#include "msl/binary_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "msl/error.hpp"

namespace msl {

namespace {

constexpr std::array<char, 4> kMagic{'M', 'S', 'L', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                              static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  os.write(b.data(), 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void write_float_array(const std::filesystem::path& path, std::uint32_t width, std::uint32_t height,
                       std::span<const float> values) {
  if (static_cast<std::uint64_t>(width) * height != values.size())
    throw ShapeError("float array size does not match header dimensions");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open for writing: " + path.string());
  os.write(kMagic.data(), 4);
  put_u32(os, width);
  put_u32(os, height);
  put_u32(os, 0);
  for (float f : values) put_u32(os, std::bit_cast<std::uint32_t>(f));
  if (!os) throw Error("write failed: " + path.string());
}

FloatArray read_float_array(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw MissingArtifact("missing or unreadable array file: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic.data(), 4) != 0)
    throw Error("not an MSL1 array file: " + path.string());
  FloatArray out;
  out.width = get_u32(bytes.data() + 4);
  out.height = get_u32(bytes.data() + 8);
  const std::uint64_t count = static_cast<std::uint64_t>(out.width) * out.height;
  if (bytes.size() != 16 + 4 * count) throw ShapeError("MSL1 payload size mismatch: " + path.string());
  out.values.resize(count);
  for (std::uint64_t i = 0; i < count; ++i)
    out.values[i] = std::bit_cast<float>(get_u32(bytes.data() + 16 + 4 * i));
  return out;
}

}  // namespace msl
