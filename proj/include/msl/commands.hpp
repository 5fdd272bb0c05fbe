#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "msl/config.hpp"
#include "msl/decoder.hpp"
#include "msl/pipeline.hpp"
#include "msl/synth.hpp"

namespace msl {

inline constexpr const char* kVersion = "1.0.0";

struct CliOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::filesystem::path run;
  std::filesystem::path data;
  int workers = 1;
  std::string decoder;  // "careless" or "careful:SIGMA"; learn only
};

/// Parses "careless" or "careful:SIGMA"; the radius is multiplier * SIGMA.
DecoderParams parse_decoder_override(const std::string& text, double radius_multiplier);

/// Reads a dataset directory and re-creates its train/val/test partition from
/// the split recorded in its manifest.
Splits load_splits(const std::filesystem::path& data_dir);

/// Writes results.json, manifest.json and one candidate_NNN/ directory per
/// table row. `kind` is "learn" or "loop".
void write_run(const std::filesystem::path& run_dir, const std::string& kind, const nlohmann::json& config,
               const LoopResult& result, double total_seconds);

std::filesystem::path cmd_gen(const CliOptions& opts);
std::filesystem::path cmd_learn(const CliOptions& opts);
std::filesystem::path cmd_loop(const CliOptions& opts);
/// Writes <run>/test_report.json for the test split and returns its path.
std::filesystem::path cmd_test(const CliOptions& opts);
/// Prints the candidate table sorted by validation loss and writes <run>/table.csv.
std::filesystem::path cmd_report(const CliOptions& opts, std::ostream& out);

/// Applies MSL_LOG (error|info|debug) to the default logger.
void configure_logging();

}  // namespace msl
