#pragma once

// Independent reference computations used only by tests. None of these call
// into the code paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "msl/encoder.hpp"
#include "msl/grid.hpp"
#include "msl/inferrer.hpp"
#include "msl/random.hpp"

namespace msl::oracle {

/// Closed-form careful decoder value at pixel (x, y).
inline double careful_value(const PointSet& truth, int x, int y, double sigma, double radius) {
  double best = 0.0;
  for (const Point& q : truth) {
    const double d = std::hypot(x - q.x, y - q.y);
    if (d <= radius) best = std::max(best, std::exp(-(d * d) / (2.0 * sigma * sigma)));
  }
  return best;
}

/// Straight-line forward pass: output = b2 + sum_h w2[h] * tanh(b1[h] + <w1[h], patch>).
inline long double forward(const InferrerParams& p, const std::vector<double>& patch) {
  const std::size_t dim = patch.size();
  long double out = p.b2;
  for (std::size_t h = 0; h < p.b1.size(); ++h) {
    long double z = p.b1[h];
    for (std::size_t i = 0; i < dim; ++i) z += static_cast<long double>(p.w1[h * dim + i]) * patch[i];
    out += static_cast<long double>(p.w2[h]) * std::tanh(z);
  }
  return out;
}

/// Mean squared error over (patch, target) pairs, from the flat parameter vector.
inline long double batch_loss(const Architecture& arch, const std::vector<double>& flat,
                              const std::vector<std::vector<double>>& patches, const std::vector<double>& targets) {
  const InferrerParams p = InferrerParams::unflatten(arch, flat);
  long double sum = 0.0L;
  for (std::size_t k = 0; k < patches.size(); ++k) {
    const long double r = forward(p, patches[k]) - targets[k];
    sum += r * r;
  }
  return sum / static_cast<long double>(patches.size());
}

/// Central finite differences of batch_loss with the given step.
inline std::vector<double> finite_difference_gradient(const Architecture& arch, std::vector<double> flat,
                                                      const std::vector<std::vector<double>>& patches,
                                                      const std::vector<double>& targets, double step) {
  std::vector<double> grad(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double orig = flat[i];
    flat[i] = orig + step;
    const long double up = batch_loss(arch, flat, patches, targets);
    flat[i] = orig - step;
    const long double down = batch_loss(arch, flat, patches, targets);
    flat[i] = orig;
    grad[i] = static_cast<double>((up - down) / (2.0L * step));
  }
  return grad;
}

/// Peaks by exhaustive 3x3 window scan (out-of-bounds is -inf), then suppression
/// decided candidate by candidate from explicit priority ranks.
inline PointSet encode(const PredictedMap& t, double threshold, double min_sep) {
  const int w = t.width(), h = t.height();
  auto value = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return -std::numeric_limits<double>::infinity();
    return std::min(1.0, std::max(0.0, t.at(x, y)));
  };
  struct Cand {
    int x, y;
    double v;
  };
  std::vector<Cand> cands;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double window_max = -std::numeric_limits<double>::infinity();
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) window_max = std::max(window_max, value(x + dx, y + dy));
      if (value(x, y) == window_max && value(x, y) >= threshold) cands.push_back({x, y, value(x, y)});
    }
  // rank[i] = number of candidates that outrank i
  const auto outranks = [&](const Cand& a, const Cand& b) {
    return a.v > b.v || (a.v == b.v && (a.y * w + a.x) < (b.y * w + b.x));
  };
  std::vector<std::size_t> order(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i)
    for (std::size_t j = 0; j < cands.size(); ++j)
      if (j != i && outranks(cands[j], cands[i])) ++order[i];
  std::vector<std::size_t> by_rank(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) by_rank[order[i]] = i;

  std::vector<bool> kept(cands.size(), false);
  for (std::size_t r = 0; r < by_rank.size(); ++r) {
    const Cand& c = cands[by_rank[r]];
    bool ok = true;
    for (std::size_t s = 0; s < r; ++s) {
      const Cand& k = cands[by_rank[s]];
      if (kept[by_rank[s]] && std::hypot(c.x - k.x, c.y - k.y) < min_sep) ok = false;
    }
    kept[by_rank[r]] = ok;
  }
  PointSet out;
  for (std::size_t r = 0; r < by_rank.size(); ++r)
    if (kept[by_rank[r]]) out.push_back({double(cands[by_rank[r]].x), double(cands[by_rank[r]].y)});
  return out;
}

/// Maximum-cardinality matching within tau by exhaustive search over all
/// injective assignments.
inline std::size_t optimal_tp(const PointSet& g, const PointSet& g_star, double tau) {
  std::vector<bool> used(g_star.size(), false);
  std::function<std::size_t(std::size_t)> best = [&](std::size_t i) -> std::size_t {
    if (i == g.size()) return 0;
    std::size_t result = best(i + 1);  // prediction i unmatched
    for (std::size_t j = 0; j < g_star.size(); ++j) {
      if (used[j] || std::hypot(g[i].x - g_star[j].x, g[i].y - g_star[j].y) > tau) continue;
      used[j] = true;
      result = std::max(result, 1 + best(i + 1));
      used[j] = false;
    }
    return result;
  };
  return best(0);
}

inline double min_pairwise_distance(const PointSet& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::min(best, std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y));
  return best;
}

inline InferrerParams random_params(const Architecture& arch, Rng& rng, double scale) {
  InferrerParams p = InferrerParams::zeros(arch);
  for (double& v : p.w1) v = rng.uniform(-scale, scale);
  for (double& v : p.b1) v = rng.uniform(-scale, scale);
  for (double& v : p.w2) v = rng.uniform(-scale, scale);
  p.b2 = rng.uniform(-scale, scale);
  return p;
}

inline PredictedMap random_map(Shape shape, Rng& rng, double lo = -0.2, double hi = 1.2) {
  PredictedMap t(shape);
  for (double& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

}  // namespace msl::oracle
