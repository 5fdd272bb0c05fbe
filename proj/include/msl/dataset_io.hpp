#pragma once

#include <filesystem>

#include <json.hpp>

#include "msl/grid.hpp"

namespace msl {

/// A dataset directory: manifest.json plus sample_NNNNN.bin (lattice) and
/// sample_NNNNN.json (truth points as [[x, y], ...]) per sample.
struct StoredDataset {
  Dataset data;
  nlohmann::json manifest;
};

/// Writes every sample and a manifest. `config_echo` is stored verbatim under
/// "config"; `seed` under "seed".
void write_dataset(const std::filesystem::path& dir, const Dataset& ds, std::uint64_t seed,
                   const nlohmann::json& config_echo);

StoredDataset read_dataset(const std::filesystem::path& dir);

nlohmann::json points_to_json(const PointSet& points);
PointSet points_from_json(const nlohmann::json& j);

}  // namespace msl
