#pragma once

#include <cstddef>
#include <cstdint>

#include "msl/grid.hpp"
#include "msl/random.hpp"

namespace msl {

/// Synthetic blob-image generator settings.
struct SynthConfig {
  int width = 64;
  int height = 64;
  int blob_count_min = 5;
  int blob_count_max = 12;
  double blob_amplitude = 0.8;
  double blob_radius = 3.0;
  double min_separation = 6.0;
  double noise_std = 0.05;
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

inline constexpr int kPlacementAttempts = 10'000;

/// One blob image with its centre-point ground truth. Intensities are stored
/// at 32-bit float precision so the on-disk form round-trips exactly.
Sample generate_sample(const SynthConfig& cfg, Rng& rng);

/// n samples; sample k uses the sub-seed derive_seed(cfg.seed, k).
Dataset generate_dataset(const SynthConfig& cfg, std::size_t n);

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;

  void validate() const;
};

struct Splits {
  Dataset train;
  Dataset val;
  Dataset test;
};

/// Seeded shuffle then floor allocation; the remainder goes to train.
Splits split(const Dataset& ds, const SplitFractions& fractions, std::uint64_t seed);

}  // namespace msl
