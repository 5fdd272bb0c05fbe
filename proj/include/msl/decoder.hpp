#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "msl/grid.hpp"

namespace msl {

enum class DecoderVariant { Careless, Careful };

/// Decoder parameters. Careless is the non-parameterized transformation (a
/// single lit pixel per point); Careful is a truncated Gaussian proximity map.
struct DecoderParams {
  DecoderVariant variant = DecoderVariant::Careless;
  double sigma = 0.0;
  double radius = 0.0;

  static DecoderParams careless() { return {}; }
  static DecoderParams careful(double sigma, double radius) { return {DecoderVariant::Careful, sigma, radius}; }

  void validate() const;
  friend bool operator==(const DecoderParams&, const DecoderParams&) = default;
};

struct DecoderSpace {
  std::vector<DecoderParams> candidates;
};

/// 1 at the half-up rounded pixel of every point, 0 elsewhere.
TargetMap decode_careless(const PointSet& truth, Shape shape);

/// Per pixel: max over points q with |p - q| <= radius of exp(-|p - q|^2 / (2 sigma^2)).
TargetMap decode_careful(const PointSet& truth, Shape shape, const DecoderParams& params);

/// Dispatches on params.variant.
TargetMap decode(const PointSet& truth, Shape shape, const DecoderParams& params);

/// Careful candidates (s, radius_multiplier * s) in input order, optionally
/// preceded by the careless candidate.
DecoderSpace decoder_grid(std::span<const double> sigmas, double radius_multiplier, bool include_careless = false);

// Process-wide count of decode calls, for verifying that evaluation paths
// never touch the decoder.
std::uint64_t decoder_invocations();
void reset_decoder_invocations();

void to_json(nlohmann::json& j, const DecoderParams& p);
void from_json(const nlohmann::json& j, DecoderParams& p);

}  // namespace msl
