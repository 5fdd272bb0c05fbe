#include <doctest.h>

#include <cmath>

#include "msl/decoder.hpp"
#include "msl/serial.hpp"
#include "oracles.hpp"

using namespace msl;

TEST_CASE("decode_careless") {
  const Shape s{5, 5};
  const TargetMap empty = decode_careless({}, s);
  for (double v : empty.values()) CHECK(v == 0.0);

  const TargetMap one = decode_careless({{2.0, 2.0}}, s);
  int nonzero = 0;
  for (double v : one.values()) nonzero += v != 0.0;
  CHECK(nonzero == 1);
  CHECK(one.at(2, 2) == 1.0);

  const TargetMap merged = decode_careless({{1.6, 2.4}, {2.2, 1.5}}, s);
  nonzero = 0;
  for (double v : merged.values()) nonzero += v != 0.0;
  CHECK(nonzero == 1);
  CHECK(merged.at(2, 2) == 1.0);

  // half-up rounding, clamped into the lattice
  CHECK(decode_careless({{0.5, 0.49}}, s).at(1, 0) == 1.0);
  CHECK(decode_careless({{4.6, 4.9}}, s).at(4, 4) == 1.0);
  CHECK_THROWS_AS(decode_careless({{5.0, 1.0}}, s), ShapeError);
}

TEST_CASE("decode_careful: closed-form values") {
  const Shape s{5, 5};
  for (double sigma : {0.3, 1.0, 2.5}) {
    CHECK(decode_careful({{2, 2}}, s, DecoderParams::careful(sigma, 3.0 * sigma)).at(2, 2) == 1.0);
  }
  const TargetMap t = decode_careful({{2, 2}}, s, DecoderParams::careful(1.0, 3.0));
  CHECK(std::abs(t.at(3, 2) - std::exp(-0.5)) < 1e-12);
  CHECK(std::abs(t.at(3, 2) - 0.60653) < 1e-5);
  CHECK(t.at(2, 2) == 1.0);
  // outside the radius: (2,2) to (0,0) is 2.83 < 3 but (4,4) to (0,0) in a 1-radius map is cut
  CHECK(decode_careful({{2, 2}}, s, DecoderParams::careful(1.0, 1.0)).at(0, 0) == 0.0);

  const TargetMap two = decode_careful({{1, 2}, {3, 2}}, s, DecoderParams::careful(1.0, 3.0));
  CHECK(std::abs(two.at(2, 2) - oracle::careful_value({{1, 2}, {3, 2}}, 2, 2, 1.0, 3.0)) < 1e-12);
  CHECK(std::abs(two.at(2, 2) - std::exp(-0.5)) < 1e-12);  // max, not the sum 2 exp(-0.5)

  CHECK(decode_careful({}, s, DecoderParams::careful(1.0, 3.0)) == TargetMap(s));
  CHECK_THROWS_AS(decode_careful({{2, 2}}, s, DecoderParams::careless()), VariantMismatch);
  CHECK_THROWS_AS(decode_careful({{2, 2}}, s, DecoderParams::careful(2.0, 1.0)), ConfigError);
}

TEST_CASE("decode_careful: properties over random truths") {
  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    const Shape s{int(8 + rng.below(20)), int(8 + rng.below(20))};
    PointSet truth;
    const auto k = rng.below(6);
    for (std::uint64_t i = 0; i < k; ++i) truth.push_back({double(rng.below(s.width)), double(rng.below(s.height))});
    const double sigma = rng.uniform(0.5, 3.0);
    const auto params = DecoderParams::careful(sigma, sigma * rng.uniform(1.0, 4.0));
    const TargetMap t = decode_careful(truth, s, params);
    CHECK(t == serial::decode_careful(truth, s, params));
    for (double v : t.values()) CHECK((v >= 0.0 && v <= 1.0));
    for (const Point& p : truth) CHECK(t.at(int(p.x), int(p.y)) == 1.0);
  }
}

TEST_CASE("decode_careful: monotone decay along rays from an isolated point") {
  const Shape s{41, 41};
  const TargetMap t = decode_careful({{20, 20}}, s, DecoderParams::careful(3.0, 15.0));
  const int dirs[8][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
  for (const auto& d : dirs) {
    for (int step = 0; step < 20; ++step) {
      CHECK(t.at(20 + d[0] * (step + 1), 20 + d[1] * (step + 1)) <= t.at(20 + d[0] * step, 20 + d[1] * step));
    }
  }
}

TEST_CASE("decode_careful approaches careless as sigma -> 0") {
  const Shape s{12, 9};
  const PointSet truth{{3, 4}, {7, 1}, {11, 8}};
  const TargetMap careful = decode_careful(truth, s, DecoderParams::careful(1e-3, 1.0));
  const TargetMap careless = decode_careless(truth, s);
  for (std::size_t i = 0; i < careful.size(); ++i) CHECK(std::abs(careful[i] - careless[i]) <= 1e-6);
}

TEST_CASE("decoder_grid") {
  const std::vector<double> one{1.0};
  CHECK(decoder_grid(one, 3.0).candidates.size() == 1);

  const std::vector<double> three{1.0, 2.0, 3.0};
  const DecoderSpace g = decoder_grid(three, 3.0);
  REQUIRE(g.candidates.size() == 3);
  CHECK(g.candidates[0].radius == 3.0);
  CHECK(g.candidates[1].radius == 6.0);
  CHECK(g.candidates[2].radius == 9.0);

  const std::vector<double> two{2.0};
  const DecoderSpace c = decoder_grid(two, 3.0, true);
  REQUIRE(c.candidates.size() == 2);
  CHECK(c.candidates[0] == DecoderParams::careless());
  CHECK(c.candidates[1] == DecoderParams::careful(2.0, 6.0));

  CHECK_THROWS_AS(decoder_grid(std::vector<double>{}, 3.0), ConfigError);
  CHECK_THROWS_AS(decoder_grid(one, 0.5), ConfigError);
  CHECK_THROWS_AS(decoder_grid(std::vector<double>{1.0, 1.0}, 3.0), ConfigError);
}

TEST_CASE("DecoderParams json") {
  const nlohmann::json j = DecoderParams::careful(2.0, 6.0);
  CHECK(j.dump() == R"({"radius":6.0,"sigma":2.0,"variant":"careful"})");
  CHECK(j.get<DecoderParams>() == DecoderParams::careful(2.0, 6.0));
  CHECK(nlohmann::json(DecoderParams::careless()).at("variant") == "careless");
  CHECK_THROWS_AS(nlohmann::json({{"variant", "fancy"}}).get<DecoderParams>(), ConfigError);
}

TEST_CASE("decoder invocation counter") {
  reset_decoder_invocations();
  decode_careless({}, {3, 3});
  decode({}, {3, 3}, DecoderParams::careful(1.0, 1.0));
  CHECK(decoder_invocations() == 2);
}
