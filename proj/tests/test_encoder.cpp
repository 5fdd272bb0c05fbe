#include <doctest.h>

#include <cmath>

#include "msl/decoder.hpp"
#include "msl/metrics.hpp"
#include "msl/serial.hpp"
#include "oracles.hpp"

using namespace msl;

namespace {

PredictedMap as_prediction(const TargetMap& t) { return PredictedMap(t.shape(), {t.values().begin(), t.values().end()}); }

}  // namespace

TEST_CASE("encode: basics") {
  CHECK(encode(PredictedMap(Shape{6, 6}), {0.5, 2.0}).empty());

  const TargetMap peak = decode_careful({{3, 3}}, {7, 7}, DecoderParams::careful(1.0, 3.0));
  const PointSet one = encode(as_prediction(peak), {0.5, 2.0});
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Point{3, 3});
  CHECK(one == oracle::encode(as_prediction(peak), 0.5, 2.0));

  PredictedMap two(Shape{8, 5});
  two.at(3, 2) = 0.9;
  two.at(4, 2) = 0.8;
  const PointSet survivors = encode(two, {0.5, 2.0});
  REQUIRE(survivors.size() == 1);
  CHECK(survivors[0] == Point{3, 2});
}

TEST_CASE("encode: clamps raw predictions and resolves plateaus row-major") {
  PredictedMap t(Shape{6, 4}, -0.3);
  t.at(1, 1) = 1.7;
  t.at(2, 1) = 1.2;  // both clamp to 1: a flat top
  const PointSet g = encode(t, {0.5, 2.0});
  REQUIRE(g.size() == 1);
  CHECK(g[0] == Point{1, 1});
}

TEST_CASE("encode: agrees with brute-force oracle; separation and monotone count") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const PredictedMap t = oracle::random_map({int(4 + rng.below(12)), int(4 + rng.below(12))}, rng);
    const EncoderParams p{rng.uniform(0.05, 0.95), rng.uniform(1.0, 4.0)};
    const PointSet g = encode(t, p);
    CHECK(g == oracle::encode(t, p.threshold, p.min_separation));
    if (g.size() > 1) CHECK(oracle::min_pairwise_distance(g) >= p.min_separation);
    for (const Point& q : g) CHECK(in_bounds(q, t.shape()));
    const PointSet higher = encode(t, {std::min(0.99, p.threshold + 0.2), p.min_separation});
    CHECK(higher.size() <= g.size());
  }
}

TEST_CASE("encode: re-encoding an ideal single-peak map is idempotent") {
  const TargetMap peak = decode_careful({{5, 4}}, {11, 9}, DecoderParams::careful(1.5, 4.5));
  const PointSet g = encode(as_prediction(peak), {0.3, 2.0});
  REQUIRE(g.size() == 1);
  const TargetMap redecoded = decode_careful(g, {11, 9}, DecoderParams::careful(1.5, 4.5));
  CHECK(encode(as_prediction(redecoded), {0.3, 2.0}) == g);
}

TEST_CASE("encoder_grid") {
  CHECK(encoder_grid(std::vector<double>{0.5}, std::vector<double>{2.0}).candidates.size() == 1);
  const EncoderSpace g = encoder_grid(std::vector<double>{0.3, 0.5}, std::vector<double>{2.0, 3.0});
  REQUIRE(g.candidates.size() == 4);
  CHECK(g.candidates[0] == EncoderParams{0.3, 2.0});
  CHECK(g.candidates[1] == EncoderParams{0.3, 3.0});
  CHECK(g.candidates[2] == EncoderParams{0.5, 2.0});
  CHECK(g.candidates[3] == EncoderParams{0.5, 3.0});
  CHECK_THROWS_AS(encoder_grid(std::vector<double>{0.5, 0.5}, std::vector<double>{2.0}), ConfigError);
  CHECK_THROWS_AS(encoder_grid(std::vector<double>{}, std::vector<double>{2.0}), ConfigError);
  CHECK_THROWS_AS(encoder_grid(std::vector<double>{0.5}, std::vector<double>{}), ConfigError);
  CHECK_THROWS_AS(encoder_grid(std::vector<double>{1.0}, std::vector<double>{2.0}), ConfigError);
  CHECK_THROWS_AS(encoder_grid(std::vector<double>{0.5}, std::vector<double>{0.5}), ConfigError);
}

TEST_CASE("fit_encoder: argmin contract and independent recomputation") {
  Rng rng(9);
  const Shape s{20, 20};
  std::vector<PredictedMap> maps;
  std::vector<PointSet> truths;
  for (int k = 0; k < 6; ++k) {
    PointSet truth;
    for (int i = 0; i < 3; ++i) truth.push_back({double(2 + rng.below(16)), double(2 + rng.below(16))});
    PredictedMap m = as_prediction(decode_careful(truth, s, DecoderParams::careful(1.5, 4.5)));
    for (double& v : m.values()) v += rng.uniform(-0.3, 0.3);
    maps.push_back(std::move(m));
    truths.push_back(truth);
  }
  const EncoderSpace space =
      encoder_grid(std::vector<double>{0.2, 0.4, 0.6, 0.8}, std::vector<double>{1.0, 2.0, 4.0});

  const EncoderFit single = fit_encoder(maps, truths, EncoderSpace{{space.candidates[5]}}, 2.0);
  CHECK(single.best == space.candidates[5]);

  const EncoderFit fit = fit_encoder(maps, truths, space, 2.0);
  REQUIRE(fit.mean_losses.size() == space.candidates.size());
  for (double l : fit.mean_losses) CHECK(fit.mean_losses[fit.best_index] <= l);
  for (std::size_t c = 0; c < fit.best_index; ++c) CHECK(fit.mean_losses[c] > fit.mean_losses[fit.best_index]);
  CHECK(fit.best == space.candidates[fit.best_index]);

  double recomputed = 0.0;
  for (std::size_t k = 0; k < maps.size(); ++k)
    recomputed += detection_loss(oracle::encode(maps[k], fit.best.threshold, fit.best.min_separation), truths[k], 2.0);
  CHECK(std::abs(recomputed / double(maps.size()) - fit.mean_losses[fit.best_index]) < 1e-12);

  const EncoderFit ref = serial::fit_encoder(maps, truths, space, 2.0);
  CHECK(ref.mean_losses == fit.mean_losses);
  CHECK(ref.best_index == fit.best_index);

  // Identical candidates' losses tie; the earlier one wins.
  EncoderSpace tied{{space.candidates[0], {0.2, 1.5}}};
  const EncoderFit t = fit_encoder(std::span(maps).first(1), std::span(truths).first(1), tied, 2.0);
  if (t.mean_losses[0] == t.mean_losses[1]) CHECK(t.best_index == 0);
}

TEST_CASE("EncoderParams json") {
  const nlohmann::json j = EncoderParams{0.4, 3.0};
  CHECK(j.dump() == R"({"min_separation":3.0,"threshold":0.4})");
  CHECK(j.get<EncoderParams>() == EncoderParams{0.4, 3.0});
}
