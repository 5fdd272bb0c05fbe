#pragma once

#include <filesystem>

#include <json.hpp>

#include "msl/inferrer.hpp"

namespace msl {

/// Rounds every parameter to float32 precision, the precision of the model file.
InferrerParams quantize_to_float(const InferrerParams& params);

/// Writes <dir>/model.json (metadata) and <dir>/model.bin (MSL1 flat dump,
/// width = parameter count, height = 1).
void write_model(const std::filesystem::path& dir, const InferrerParams& params, const TrainConfig& cfg);

struct StoredModel {
  InferrerParams params;
  nlohmann::json metadata;
};

StoredModel read_model(const std::filesystem::path& dir);

}  // namespace msl
