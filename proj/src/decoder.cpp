#include "msl/decoder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace msl {

namespace {

std::atomic<std::uint64_t> g_invocations{0};

void check_points(const PointSet& truth, Shape shape) {
  for (const Point& p : truth)
    if (!in_bounds(p, shape)) throw ShapeError("truth point outside lattice bounds");
}

}  // namespace

std::uint64_t decoder_invocations() { return g_invocations.load(); }
void reset_decoder_invocations() { g_invocations.store(0); }

void DecoderParams::validate() const {
  if (variant == DecoderVariant::Careless) return;
  if (!(sigma > 0.0)) throw ConfigError("decoder.sigma must be > 0");
  if (!(radius >= sigma)) throw ConfigError("decoder.radius must be >= sigma");
}

TargetMap decode_careless(const PointSet& truth, Shape shape) {
  ++g_invocations;
  check_points(truth, shape);
  TargetMap t(shape);
  for (const Point& p : truth) {
    const int x = std::min(static_cast<int>(std::floor(p.x + 0.5)), shape.width - 1);
    const int y = std::min(static_cast<int>(std::floor(p.y + 0.5)), shape.height - 1);
    t.at(x, y) = 1.0;
  }
  return t;
}

TargetMap decode_careful(const PointSet& truth, Shape shape, const DecoderParams& params) {
  if (params.variant != DecoderVariant::Careful) throw VariantMismatch("decode_careful requires careful parameters");
  params.validate();
  ++g_invocations;
  check_points(truth, shape);
  TargetMap t(shape);
  const double r2 = params.radius * params.radius;
  const double inv_two_s2 = 1.0 / (2.0 * params.sigma * params.sigma);

  // Rows are independent; each row only visits points whose disc reaches it.
#pragma omp parallel for schedule(static)
  for (int y = 0; y < shape.height; ++y) {
    for (const Point& q : truth) {
      const double dy = y - q.y;
      if (dy * dy > r2) continue;
      const int x0 = std::max(0, static_cast<int>(std::floor(q.x - params.radius)));
      const int x1 = std::min(shape.width - 1, static_cast<int>(std::ceil(q.x + params.radius)));
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - q.x;
        const double d2 = dx * dx + dy * dy;
        if (d2 > r2) continue;
        const double v = std::exp(-d2 * inv_two_s2);
        double& cell = t.at(x, y);
        if (v > cell) cell = v;
      }
    }
  }
  return t;
}

TargetMap decode(const PointSet& truth, Shape shape, const DecoderParams& params) {
  return params.variant == DecoderVariant::Careless ? decode_careless(truth, shape)
                                                    : decode_careful(truth, shape, params);
}

DecoderSpace decoder_grid(std::span<const double> sigmas, double radius_multiplier, bool include_careless) {
  if (sigmas.empty()) throw ConfigError("decoder.sigmas must be non-empty");
  if (!(radius_multiplier >= 1.0)) throw ConfigError("decoder.radius_multiplier must be >= 1");
  DecoderSpace space;
  if (include_careless) space.candidates.push_back(DecoderParams::careless());
  for (double s : sigmas) {
    if (!(s > 0.0)) throw ConfigError("decoder.sigmas must be positive");
    const auto p = DecoderParams::careful(s, radius_multiplier * s);
    if (std::find(space.candidates.begin(), space.candidates.end(), p) != space.candidates.end())
      throw ConfigError("decoder.sigmas contains a duplicate candidate");
    space.candidates.push_back(p);
  }
  return space;
}

void to_json(nlohmann::json& j, const DecoderParams& p) {
  j = {{"variant", p.variant == DecoderVariant::Careless ? "careless" : "careful"},
       {"sigma", p.sigma},
       {"radius", p.radius}};
}

void from_json(const nlohmann::json& j, DecoderParams& p) {
  const auto variant = j.at("variant").get<std::string>();
  if (variant == "careless") {
    p = DecoderParams::careless();
  } else if (variant == "careful") {
    p = DecoderParams::careful(j.at("sigma").get<double>(), j.at("radius").get<double>());
    p.validate();
  } else {
    throw ConfigError("decoder.variant must be \"careless\" or \"careful\"");
  }
}

}  // namespace msl
