#include "msl/pipeline.hpp"

#include <chrono>
#include <exception>
#include <limits>

#include <spdlog/spdlog.h>

#include "msl/model_io.hpp"
#include "msl/random.hpp"

namespace msl {

std::vector<TargetMap> decode_targets(const Dataset& ds, const DecoderParams& params) {
  std::vector<TargetMap> out;
  out.reserve(ds.size());
  for (const Sample& s : ds.samples) out.push_back(decode(s.truth, s.lattice.shape(), params));
  return out;
}

std::vector<PredictedMap> infer_all(const Dataset& ds, const InferrerParams& params) {
  std::vector<PredictedMap> out;
  out.reserve(ds.size());
  for (const Sample& s : ds.samples) out.push_back(infer(s.lattice, params));
  return out;
}

std::vector<PointSet> truths_of(const Dataset& ds) {
  std::vector<PointSet> out;
  out.reserve(ds.size());
  for (const Sample& s : ds.samples) out.push_back(s.truth);
  return out;
}

LearnedSolution learn(const Dataset& train, const Dataset& val, const DecoderParams& decoder, const Architecture& arch,
                      const TrainConfig& train_cfg, const EncoderSpace& encoder_space, double tau) {
  if (train.empty() || val.empty()) throw ConfigError("learn needs non-empty train and validation splits");
  decoder.validate();

  LearnedSolution sol;
  sol.decoder = decoder;
  sol.train_config = train_cfg;
  sol.train_targets = decode_targets(train, decoder);

  std::vector<ImageLattice> lattices;
  lattices.reserve(train.size());
  for (const Sample& s : train.samples) lattices.push_back(s.lattice);
  TrainResult trained = msl::train(lattices, sol.train_targets, arch, train_cfg);
  sol.inferrer = quantize_to_float(trained.params);
  sol.trace = std::move(trained.trace);

  const std::vector<PredictedMap> val_maps = infer_all(val, sol.inferrer);
  const std::vector<PointSet> val_truths = truths_of(val);
  sol.encoder_fit = fit_encoder(val_maps, val_truths, encoder_space, tau);
  sol.encoder = sol.encoder_fit.best;

  std::vector<PointSet> predicted;
  predicted.reserve(val_maps.size());
  for (const PredictedMap& t : val_maps) predicted.push_back(encode(t, sol.encoder));
  sol.validation = report(predicted, val_truths, tau);
  return sol;
}

TrainConfig candidate_config(const TrainConfig& base, std::size_t index) {
  TrainConfig cfg = base;
  cfg.seed = derive_seed(base.seed, index);
  return cfg;
}

LoopResult loop(const Dataset& train, const Dataset& val, const DecoderSpace& decoder_space, const Architecture& arch,
                const TrainConfig& train_cfg, const EncoderSpace& encoder_space, double tau, int workers) {
  if (decoder_space.candidates.empty()) throw ConfigError("decoder space is empty");
  if (workers < 1) throw ConfigError("workers must be >= 1");

  LoopResult result;
  result.table.resize(decoder_space.candidates.size());
  const auto n = static_cast<std::ptrdiff_t>(decoder_space.candidates.size());
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    const auto idx = static_cast<std::size_t>(c);
    LoopEntry& entry = result.table[idx];
    entry.decoder = decoder_space.candidates[idx];
    const auto start = std::chrono::steady_clock::now();
    try {
      entry.solution = learn(train, val, entry.decoder, arch, candidate_config(train_cfg, idx), encoder_space, tau);
      entry.validation_loss = entry.solution->validation.loss;
      entry.ok = true;
    } catch (const std::exception& e) {
      entry.error = e.what();
      spdlog::warn("decoder candidate {} failed: {}", idx, e.what());
    }
    entry.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t c = 0; c < result.table.size(); ++c) {
    const LoopEntry& e = result.table[c];
    if (e.ok && (!any || e.validation_loss < best)) {
      best = e.validation_loss;
      result.selected = c;
      any = true;
    }
  }
  if (!any) throw Error("every decoder candidate failed");
  return result;
}

DetectionReport test(const Dataset& ds, const InferrerParams& inferrer, const EncoderParams& encoder, double tau) {
  std::vector<PointSet> predicted;
  predicted.reserve(ds.size());
  for (const Sample& s : ds.samples) predicted.push_back(encode(infer(s.lattice, inferrer), encoder));
  return report(predicted, truths_of(ds), tau);
}

DetectionReport test(const Dataset& ds, const LearnedSolution& solution, double tau) {
  return test(ds, solution.inferrer, solution.encoder, tau);
}

DetectionReport test(const Dataset& ds, const LoopResult& result, double tau) {
  return test(ds, result.selection(), tau);
}

}  // namespace msl
