#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "msl/grid.hpp"

namespace msl {

/// Peak threshold h in (0,1) and suppression distance delta >= 1.
struct EncoderParams {
  double threshold = 0.5;
  double min_separation = 2.0;

  void validate() const;
  friend bool operator==(const EncoderParams&, const EncoderParams&) = default;
};

struct EncoderSpace {
  std::vector<EncoderParams> candidates;
};

/// Clamp to [0,1], take pixels >= all 8 neighbours and >= h, sort by value
/// (ties row-major), then greedily keep peaks at least delta from every kept one.
PointSet encode(const PredictedMap& t, const EncoderParams& params);

/// Threshold-major, separation-minor Cartesian product.
EncoderSpace encoder_grid(std::span<const double> thresholds, std::span<const double> separations);

struct EncoderFit {
  EncoderParams best;
  std::size_t best_index = 0;
  std::vector<EncoderParams> candidates;  // copy of the searched space, in order
  std::vector<double> mean_losses;        // aligned with candidates
};

/// Exhaustive argmin over the space of the mean per-sample detection loss.
/// Ties go to the earliest candidate.
EncoderFit fit_encoder(std::span<const PredictedMap> maps, std::span<const PointSet> truths, const EncoderSpace& space,
                       double tau);

/// Mean per-sample detection loss of one candidate.
double mean_detection_loss(std::span<const PredictedMap> maps, std::span<const PointSet> truths,
                           const EncoderParams& params, double tau);

void to_json(nlohmann::json& j, const EncoderParams& p);
void from_json(const nlohmann::json& j, EncoderParams& p);

}  // namespace msl
