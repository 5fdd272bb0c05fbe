#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "msl/decoder.hpp"
#include "msl/encoder.hpp"
#include "msl/inferrer.hpp"
#include "msl/synth.hpp"

namespace msl {

/// One experiment, as read from a JSON config file. All randomness derives
/// from `seed`.
struct ExperimentConfig {
  std::uint64_t seed = 0;

  SynthConfig synth;
  std::size_t n = 0;
  SplitFractions split;

  std::vector<double> decoder_sigmas;
  double radius_multiplier = 3.0;
  bool include_careless = false;

  Architecture arch;
  TrainConfig train;  // train.seed is derived from `seed`

  std::vector<double> thresholds;
  std::vector<double> separations;

  double tau = 3.0;

  std::optional<std::filesystem::path> data_dir;
  std::optional<std::filesystem::path> output_dir;

  DecoderSpace decoder_space() const;
  EncoderSpace encoder_space() const;
  std::uint64_t split_seed() const;
};

/// Validates every field; ConfigError messages name the field, e.g. "seed".
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Normalised echo that parse_config accepts back unchanged.
nlohmann::json config_echo(const ExperimentConfig& cfg);

}  // namespace msl
