#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "msl/config.hpp"
#include "msl/model_io.hpp"
#include "msl/pipeline.hpp"

using namespace msl;

namespace {

struct Setup {
  ExperimentConfig cfg = parse_config(fixture::tiny_config());
  Splits splits = split(generate_dataset(cfg.synth, cfg.n), cfg.split, cfg.split_seed());
};

const Setup& setup() {
  static const Setup s;
  return s;
}

}  // namespace

TEST_CASE("learn: degenerate passthrough with zero learning rate") {
  const Setup& s = setup();
  TrainConfig frozen = s.cfg.train;
  frozen.learning_rate = 0.0;
  const EncoderSpace one{{{0.4, 2.0}}};
  const LearnedSolution sol = learn(s.splits.train, s.splits.val, DecoderParams::careful(1.0, 3.0), s.cfg.arch,
                                    frozen, one, s.cfg.tau);
  // Stored weights are the initial ones at model-file (float32) precision.
  CHECK(sol.inferrer == quantize_to_float(init_params(s.cfg.arch, frozen.seed)));
  CHECK(sol.encoder == one.candidates[0]);
}

TEST_CASE("learn: deterministic, stores decoded targets, test on val reproduces validation report") {
  const Setup& s = setup();
  const DecoderParams d = DecoderParams::careful(2.0, 6.0);
  const auto space = s.cfg.encoder_space();
  const LearnedSolution a = learn(s.splits.train, s.splits.val, d, s.cfg.arch, s.cfg.train, space, s.cfg.tau);
  const LearnedSolution b = learn(s.splits.train, s.splits.val, d, s.cfg.arch, s.cfg.train, space, s.cfg.tau);
  CHECK(a.inferrer == b.inferrer);
  CHECK(a.encoder == b.encoder);
  CHECK(a.validation == b.validation);
  CHECK(a.train_targets == decode_targets(s.splits.train, d));
  CHECK(a.trace.epoch_loss.size() == std::size_t(s.cfg.train.epochs));

  const DetectionReport again = test(s.splits.val, a, s.cfg.tau);
  CHECK(again == a.validation);

  // The encoder was fit on validation maps from the stored inferrer.
  const EncoderFit refit = fit_encoder(infer_all(s.splits.val, a.inferrer), truths_of(s.splits.val), space, s.cfg.tau);
  CHECK(refit.best == a.encoder);
}

TEST_CASE("learn: the decoder setting changes the stored learnable targets") {
  const Setup& s = setup();
  const auto space = s.cfg.encoder_space();
  const auto a = learn(s.splits.train, s.splits.val, DecoderParams::careful(1.0, 3.0), s.cfg.arch, s.cfg.train, space, s.cfg.tau);
  const auto b = learn(s.splits.train, s.splits.val, DecoderParams::careful(2.0, 6.0), s.cfg.arch, s.cfg.train, space, s.cfg.tau);
  REQUIRE(a.train_targets.size() == b.train_targets.size());
  for (std::size_t k = 0; k < a.train_targets.size(); ++k) {
    if (!s.splits.train.samples[k].truth.empty()) CHECK(!(a.train_targets[k] == b.train_targets[k]));
  }
}

TEST_CASE("test: never touches the decoder; degenerate solution has zero recall") {
  const Setup& s = setup();
  const InferrerParams untrained = init_params(s.cfg.arch, 1);
  reset_decoder_invocations();
  const DetectionReport r = test(s.splits.test, untrained, EncoderParams{0.999, 2.0}, s.cfg.tau);
  CHECK(decoder_invocations() == 0);
  CHECK(r.recall == 0.0);
  CHECK(r.tp == 0);
}

TEST_CASE("loop: argmin, single candidate, worker-count invariance, failure handling") {
  const Setup& s = setup();
  const auto enc = s.cfg.encoder_space();
  const DecoderSpace space = s.cfg.decoder_space();

  const LoopResult one_cand = loop(s.splits.train, s.splits.val, DecoderSpace{{space.candidates[1]}}, s.cfg.arch,
                                   s.cfg.train, enc, s.cfg.tau);
  CHECK(one_cand.table.size() == 1);
  CHECK(one_cand.selected == 0);

  const LoopResult r1 = loop(s.splits.train, s.splits.val, space, s.cfg.arch, s.cfg.train, enc, s.cfg.tau, 1);
  const LoopResult r3 = loop(s.splits.train, s.splits.val, space, s.cfg.arch, s.cfg.train, enc, s.cfg.tau, 3);
  REQUIRE(r1.table.size() == space.candidates.size());
  for (const LoopEntry& e : r1.table) CHECK(r1.table[r1.selected].validation_loss <= e.validation_loss);
  for (std::size_t c = 0; c < r1.selected; ++c) CHECK(r1.table[c].validation_loss > r1.table[r1.selected].validation_loss);
  CHECK(r1.selected == r3.selected);
  for (std::size_t c = 0; c < r1.table.size(); ++c) {
    CHECK(r1.table[c].validation_loss == r3.table[c].validation_loss);
    CHECK(r1.table[c].solution->inferrer == r3.table[c].solution->inferrer);
  }
  // Each row is a fresh learn under its candidate-derived seed.
  const LearnedSolution direct = learn(s.splits.train, s.splits.val, space.candidates[2], s.cfg.arch,
                                       candidate_config(s.cfg.train, 2), enc, s.cfg.tau);
  CHECK(direct.inferrer == r1.table[2].solution->inferrer);
  CHECK(test(s.splits.test, r1, s.cfg.tau) == test(s.splits.test, r1.selection(), s.cfg.tau));

  // An invalid candidate fails on its own and is excluded from the argmin.
  const DecoderSpace mixed{{DecoderParams::careful(-1.0, 3.0), space.candidates[1]}};
  const LoopResult partial = loop(s.splits.train, s.splits.val, mixed, s.cfg.arch, s.cfg.train, enc, s.cfg.tau);
  CHECK(!partial.table[0].ok);
  CHECK(!partial.table[0].error.empty());
  CHECK(partial.table[1].ok);
  CHECK(partial.selected == 1);

  TrainConfig explode = s.cfg.train;
  explode.learning_rate = 1e9;
  CHECK_THROWS_AS(loop(s.splits.train, s.splits.val, space, s.cfg.arch, explode, enc, s.cfg.tau), Error);
  CHECK_THROWS_AS(loop(s.splits.train, s.splits.val, DecoderSpace{}, s.cfg.arch, s.cfg.train, enc, s.cfg.tau), ConfigError);
}
