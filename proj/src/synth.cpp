#include "msl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>

#include <omp.h>

namespace msl {

void SynthConfig::validate() const {
  if (width < 1) throw ConfigError("synth.width must be >= 1");
  if (height < 1) throw ConfigError("synth.height must be >= 1");
  if (blob_count_min < 0) throw ConfigError("synth.blob_count_min must be >= 0");
  if (blob_count_max < blob_count_min) throw ConfigError("synth.blob_count_max must be >= blob_count_min");
  if (!(blob_amplitude > 0.0 && blob_amplitude <= 1.0)) throw ConfigError("synth.blob_amplitude must be in (0,1]");
  if (!(blob_radius > 0.0)) throw ConfigError("synth.blob_radius must be > 0");
  if (!(min_separation > 0.0)) throw ConfigError("synth.min_separation must be > 0");
  if (!(min_separation < std::min(width, height)))
    throw ConfigError("synth.min_separation must be < min(width, height)");
  if (!(noise_std >= 0.0)) throw ConfigError("synth.noise_std must be >= 0");
}

namespace {

PointSet place_points(const SynthConfig& cfg, int count, Rng& rng) {
  PointSet points;
  points.reserve(static_cast<std::size_t>(count));
  const double min_d2 = cfg.min_separation * cfg.min_separation;
  int attempts = 0;
  while (static_cast<int>(points.size()) < count) {
    if (attempts++ >= kPlacementAttempts)
      throw PlacementError("could not place " + std::to_string(count) + " separated points in " +
                           std::to_string(kPlacementAttempts) + " attempts");
    const Point p{rng.uniform(0.0, cfg.width), rng.uniform(0.0, cfg.height)};
    const bool clear = std::all_of(points.begin(), points.end(), [&](const Point& q) {
      const double dx = p.x - q.x, dy = p.y - q.y;
      return dx * dx + dy * dy >= min_d2;
    });
    if (clear && in_bounds(p, {cfg.width, cfg.height})) points.push_back(p);
  }
  return points;
}

}  // namespace

Sample generate_sample(const SynthConfig& cfg, Rng& rng) {
  cfg.validate();
  const Shape shape{cfg.width, cfg.height};
  const auto span = static_cast<std::uint64_t>(cfg.blob_count_max - cfg.blob_count_min) + 1;
  const int count = cfg.blob_count_min + static_cast<int>(rng.below(span));

  Sample sample{ImageLattice(shape), place_points(cfg, count, rng)};
  ImageLattice& img = sample.lattice;

  const double s = cfg.blob_radius / 2.0;
  const double inv_two_s2 = 1.0 / (2.0 * s * s);
  const double cutoff = 3.0 * cfg.blob_radius;
  for (const Point& q : sample.truth) {
    const int x0 = std::max(0, static_cast<int>(std::floor(q.x - cutoff)));
    const int x1 = std::min(cfg.width - 1, static_cast<int>(std::ceil(q.x + cutoff)));
    const int y0 = std::max(0, static_cast<int>(std::floor(q.y - cutoff)));
    const int y1 = std::min(cfg.height - 1, static_cast<int>(std::ceil(q.y + cutoff)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - q.x, dy = y - q.y;
        const double d2 = dx * dx + dy * dy;
        if (d2 <= cutoff * cutoff) img.at(x, y) += cfg.blob_amplitude * std::exp(-d2 * inv_two_s2);
      }
    }
  }

  for (double& v : img.values()) {
    if (cfg.noise_std > 0.0) v += cfg.noise_std * rng.normal();
    v = static_cast<double>(static_cast<float>(std::clamp(v, 0.0, 1.0)));
  }
  return sample;
}

Dataset generate_dataset(const SynthConfig& cfg, std::size_t n) {
  if (n < 1) throw ConfigError("synth.n must be >= 1");
  cfg.validate();
  Dataset ds;
  ds.samples.resize(n);
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));
      ds.samples[static_cast<std::size_t>(k)] = generate_sample(cfg, rng);
    } catch (...) {
#pragma omp critical(msl_generate_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return ds;
}

void SplitFractions::validate() const {
  if (!(train > 0.0 && val > 0.0 && test > 0.0)) throw ConfigError("synth.split fractions must be positive");
  if (std::abs(train + val + test - 1.0) > 1e-9) throw ConfigError("synth.split fractions must sum to 1");
}

Splits split(const Dataset& ds, const SplitFractions& fractions, std::uint64_t seed) {
  fractions.validate();
  const std::size_t n = ds.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  // The epsilon absorbs representation error such as 300 * (1/6) = 49.999...
  const auto floor_of = [n](double f) { return static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9)); };
  const std::size_t n_val = floor_of(fractions.val);
  const std::size_t n_test = floor_of(fractions.test);
  if (n_val + n_test > n) throw ConfigError("synth.split leaves no room for train");
  const std::size_t n_train = n - n_val - n_test;
  if (n_train == 0 || n_val == 0 || n_test == 0)
    throw ConfigError("synth.split produces an empty split for N = " + std::to_string(n));

  Splits out;
  for (std::size_t i = 0; i < n; ++i) {
    const Sample& s = ds.samples[order[i]];
    if (i < n_train) out.train.samples.push_back(s);
    else if (i < n_train + n_val) out.val.samples.push_back(s);
    else out.test.samples.push_back(s);
  }
  return out;
}

}  // namespace msl
