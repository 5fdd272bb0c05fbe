#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "msl/decoder.hpp"
#include "msl/encoder.hpp"
#include "msl/inferrer.hpp"
#include "msl/metrics.hpp"

namespace msl {

/// Everything the learning procedure produces under one decoder setting.
struct LearnedSolution {
  DecoderParams decoder;
  TrainConfig train_config;
  InferrerParams inferrer;  // float32-exact, identical to what the model file holds
  EncoderParams encoder;
  EncoderFit encoder_fit;
  TrainTrace trace;
  DetectionReport validation;
  std::vector<TargetMap> train_targets;  // decoded learnable targets the inferrer was fit to
};

struct LoopEntry {
  DecoderParams decoder;
  bool ok = false;
  std::string error;
  double validation_loss = 0.0;
  double seconds = 0.0;
  std::optional<LearnedSolution> solution;
};

struct LoopResult {
  std::vector<LoopEntry> table;  // one row per decoder candidate, in space order
  std::size_t selected = 0;

  const LearnedSolution& selection() const { return *table.at(selected).solution; }
};

std::vector<TargetMap> decode_targets(const Dataset& ds, const DecoderParams& params);
std::vector<PredictedMap> infer_all(const Dataset& ds, const InferrerParams& params);
std::vector<PointSet> truths_of(const Dataset& ds);

/// Decode train targets, fit the inferrer to them, then fit the encoder on the
/// validation split's predicted maps and report validation detection quality.
LearnedSolution learn(const Dataset& train, const Dataset& val, const DecoderParams& decoder, const Architecture& arch,
                      const TrainConfig& train_cfg, const EncoderSpace& encoder_space, double tau);

/// Training config for loop candidate `index`: the seed becomes derive_seed(seed, index).
TrainConfig candidate_config(const TrainConfig& base, std::size_t index);

/// Runs learn for every decoder candidate (up to `workers` at once) and selects
/// the lowest validation loss, earliest candidate on ties. Failed candidates
/// stay in the table but cannot be selected; throws if every candidate fails.
LoopResult loop(const Dataset& train, const Dataset& val, const DecoderSpace& decoder_space, const Architecture& arch,
                const TrainConfig& train_cfg, const EncoderSpace& encoder_space, double tau, int workers = 1);

/// d -> inferrer -> encoder -> g for every sample; never consults the decoder.
DetectionReport test(const Dataset& ds, const InferrerParams& inferrer, const EncoderParams& encoder, double tau);
DetectionReport test(const Dataset& ds, const LearnedSolution& solution, double tau);
DetectionReport test(const Dataset& ds, const LoopResult& result, double tau);

}  // namespace msl
