#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace msl {

/// "MSL1" container: 4 magic bytes, u32 width, u32 height, 4 zero bytes,
/// then width*height little-endian float32 values.
struct FloatArray {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<float> values;
};

void write_float_array(const std::filesystem::path& path, std::uint32_t width, std::uint32_t height,
                       std::span<const float> values);
FloatArray read_float_array(const std::filesystem::path& path);

}  // namespace msl
