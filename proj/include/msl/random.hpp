#pragma once

#include <cstdint>
#include <random>

namespace msl {

/// SplitMix64 finalizer. Used for deriving independent sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Sub-seed for stream `index` under `master`: master XOR hash(index), rehashed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index));
}

// Named stream tags so that unrelated consumers of the master seed never share a stream.
namespace stream {
inline constexpr std::uint64_t kSplit = 0x5350'4C49'5400ULL;
inline constexpr std::uint64_t kTrain = 0x5452'4149'4E00ULL;
}  // namespace stream

/// Portable generator: mt19937_64 is bit-specified by the standard, and the
/// conversions below avoid the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller (one output per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace msl
