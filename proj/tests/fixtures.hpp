#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace msl::fixture {

/// A config small enough for unit tests: every command finishes in well under a second.
inline nlohmann::json tiny_config() {
  return nlohmann::json::parse(R"({
    "seed": 314,
    "synth": {"width": 20, "height": 20, "blob_count_min": 2, "blob_count_max": 4,
              "blob_amplitude": 0.8, "blob_radius": 2.0, "min_separation": 5.0,
              "noise_std": 0.05, "n": 16, "split": [0.5, 0.25, 0.25]},
    "decoder": {"sigmas": [1.0, 2.0], "radius_multiplier": 3.0, "include_careless": true},
    "inferrer": {"context_radius": 2, "hidden_units": 6, "epochs": 3,
                 "learning_rate": 0.05, "batch_pixels": 256},
    "encoder": {"thresholds": [0.2, 0.4, 0.6], "separations": [2.0, 3.0]},
    "metrics": {"tau": 3.0}
  })");
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("msl_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace msl::fixture
