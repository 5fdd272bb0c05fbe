#pragma once

// Single-threaded reference versions of the parallel kernels. They follow the
// defining formulas directly and exist for tests and benchmarks.

#include <span>

#include "msl/decoder.hpp"
#include "msl/encoder.hpp"
#include "msl/inferrer.hpp"

namespace msl::serial {

TargetMap decode_careful(const PointSet& truth, Shape shape, const DecoderParams& params);

PredictedMap infer(const ImageLattice& lattice, const InferrerParams& params);

/// One accumulator, examples in ascending order.
GradientResult gradient(const InferrerParams& params, const Minibatch& batch);

EncoderFit fit_encoder(std::span<const PredictedMap> maps, std::span<const PointSet> truths, const EncoderSpace& space,
                       double tau);

}  // namespace msl::serial
