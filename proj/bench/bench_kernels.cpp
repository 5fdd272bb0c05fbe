// Serial reference kernels against their OpenMP counterparts.

#include <vector>

#include <benchmark/benchmark.h>

#include "msl/decoder.hpp"
#include "msl/encoder.hpp"
#include "msl/inferrer.hpp"
#include "msl/pipeline.hpp"
#include "msl/serial.hpp"
#include "msl/synth.hpp"

using namespace msl;

namespace {

const Architecture kArch{4, 32};

const Dataset& data() {
  static const Dataset ds = [] {
    SynthConfig cfg;
    cfg.seed = 99;
    return generate_dataset(cfg, 16);
  }();
  return ds;
}

const InferrerParams& params() {
  static const InferrerParams p = init_params(kArch, 7);
  return p;
}

Minibatch batch(std::size_t pixels) {
  Rng rng(11);
  Minibatch b(kArch.input_dim());
  const Dataset& ds = data();
  const auto targets = decode_targets(ds, DecoderParams::careful(2.0, 6.0));
  for (std::size_t k = 0; k < pixels; ++k) {
    const std::size_t n = rng.below(ds.size());
    const Shape s = ds.samples[n].lattice.shape();
    const int x = int(rng.below(s.width)), y = int(rng.below(s.height));
    extract_patch(ds.samples[n].lattice, x, y, kArch.context_radius, b.push(targets[n].at(x, y)));
  }
  return b;
}

void BM_DecodeCareful(benchmark::State& state, bool parallel) {
  const Sample& s = data().samples[0];
  const auto p = DecoderParams::careful(3.0, 9.0);
  for (auto _ : state) {
    auto t = parallel ? decode_careful(s.truth, s.lattice.shape(), p)
                      : serial::decode_careful(s.truth, s.lattice.shape(), p);
    benchmark::DoNotOptimize(t);
  }
}

void BM_Infer(benchmark::State& state, bool parallel) {
  const ImageLattice& lat = data().samples[0].lattice;
  for (auto _ : state) {
    auto t = parallel ? infer(lat, params()) : serial::infer(lat, params());
    benchmark::DoNotOptimize(t);
  }
}

void BM_Gradient(benchmark::State& state, bool parallel) {
  const Minibatch b = batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto g = parallel ? gradient(params(), b) : serial::gradient(params(), b);
    benchmark::DoNotOptimize(g);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FitEncoder(benchmark::State& state, bool parallel) {
  const auto maps = infer_all(data(), params());
  const auto truths = truths_of(data());
  const std::vector<double> thresholds{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}, separations{2.0, 3.0, 4.0, 5.0};
  const EncoderSpace space = encoder_grid(thresholds, separations);
  for (auto _ : state) {
    auto f = parallel ? fit_encoder(maps, truths, space, 3.0) : serial::fit_encoder(maps, truths, space, 3.0);
    benchmark::DoNotOptimize(f);
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_DecodeCareful, serial, false);
BENCHMARK_CAPTURE(BM_DecodeCareful, omp, true);
BENCHMARK_CAPTURE(BM_Infer, serial, false);
BENCHMARK_CAPTURE(BM_Infer, omp, true);
BENCHMARK_CAPTURE(BM_Gradient, serial, false)->Arg(1024)->Arg(4096);
BENCHMARK_CAPTURE(BM_Gradient, omp, true)->Arg(1024)->Arg(4096);
BENCHMARK_CAPTURE(BM_FitEncoder, serial, false);
BENCHMARK_CAPTURE(BM_FitEncoder, omp, true);

BENCHMARK_MAIN();
