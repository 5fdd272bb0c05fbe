#include "msl/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "msl/metrics.hpp"

namespace msl {

void EncoderParams::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("encoder.threshold must be in (0,1)");
  if (!(min_separation >= 1.0)) throw ConfigError("encoder.min_separation must be >= 1");
}

PointSet encode(const PredictedMap& t, const EncoderParams& params) {
  params.validate();
  const int w = t.width(), h = t.height();
  const auto clamped = [&](int x, int y) { return std::clamp(t.at(x, y), 0.0, 1.0); };

  struct Peak {
    double value;
    std::size_t index;
  };
  std::vector<Peak> peaks;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = clamped(x, y);
      if (v < params.threshold) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (clamped(nx, ny) > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) peaks.push_back({v, static_cast<std::size_t>(y) * w + x});
    }
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    return a.value != b.value ? a.value > b.value : a.index < b.index;
  });

  PointSet kept;
  const double d2min = params.min_separation * params.min_separation;
  for (const Peak& p : peaks) {
    const Point q{static_cast<double>(p.index % w), static_cast<double>(p.index / w)};
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](const Point& k) {
      const double dx = k.x - q.x, dy = k.y - q.y;
      return dx * dx + dy * dy >= d2min;
    });
    if (clear) kept.push_back(q);
  }
  return kept;
}

EncoderSpace encoder_grid(std::span<const double> thresholds, std::span<const double> separations) {
  if (thresholds.empty()) throw ConfigError("encoder.thresholds must be non-empty");
  if (separations.empty()) throw ConfigError("encoder.separations must be non-empty");
  EncoderSpace space;
  for (double h : thresholds) {
    for (double d : separations) {
      const EncoderParams p{h, d};
      p.validate();
      if (std::find(space.candidates.begin(), space.candidates.end(), p) != space.candidates.end())
        throw ConfigError("encoder grid contains a duplicate candidate");
      space.candidates.push_back(p);
    }
  }
  return space;
}

double mean_detection_loss(std::span<const PredictedMap> maps, std::span<const PointSet> truths,
                           const EncoderParams& params, double tau) {
  if (maps.size() != truths.size()) throw ShapeError("fit_encoder needs one truth per map");
  if (maps.empty()) throw ShapeError("fit_encoder needs at least one map");
  double sum = 0.0;
  for (std::size_t k = 0; k < maps.size(); ++k) sum += detection_loss(encode(maps[k], params), truths[k], tau);
  return sum / static_cast<double>(maps.size());
}

EncoderFit fit_encoder(std::span<const PredictedMap> maps, std::span<const PointSet> truths, const EncoderSpace& space,
                       double tau) {
  if (space.candidates.empty()) throw ConfigError("encoder space is empty");
  if (maps.size() != truths.size()) throw ShapeError("fit_encoder needs one truth per map");
  if (maps.empty()) throw ShapeError("fit_encoder needs at least one map");

  if (!(tau > 0.0)) throw ConfigError("metrics.tau must be > 0");
  for (const EncoderParams& p : space.candidates) p.validate();

  EncoderFit fit;
  fit.candidates = space.candidates;
  fit.mean_losses.assign(space.candidates.size(), 0.0);
  const auto n = static_cast<std::ptrdiff_t>(space.candidates.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < n; ++c)
    fit.mean_losses[static_cast<std::size_t>(c)] =
        mean_detection_loss(maps, truths, space.candidates[static_cast<std::size_t>(c)], tau);

  // Strict < keeps the earliest candidate on ties.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < fit.mean_losses.size(); ++c) {
    if (fit.mean_losses[c] < best) {
      best = fit.mean_losses[c];
      fit.best_index = c;
    }
  }
  fit.best = space.candidates[fit.best_index];
  return fit;
}

void to_json(nlohmann::json& j, const EncoderParams& p) {
  j = {{"threshold", p.threshold}, {"min_separation", p.min_separation}};
}

void from_json(const nlohmann::json& j, EncoderParams& p) {
  p.threshold = j.at("threshold").get<double>();
  p.min_separation = j.at("min_separation").get<double>();
  p.validate();
}

}  // namespace msl
