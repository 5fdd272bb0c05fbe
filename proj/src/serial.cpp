#include "msl/serial.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace msl::serial {

TargetMap decode_careful(const PointSet& truth, Shape shape, const DecoderParams& params) {
  if (params.variant != DecoderVariant::Careful) throw VariantMismatch("decode_careful requires careful parameters");
  params.validate();
  TargetMap t(shape);
  for (int y = 0; y < shape.height; ++y) {
    for (int x = 0; x < shape.width; ++x) {
      double best = 0.0;
      for (const Point& q : truth) {
        const double dx = x - q.x;
        const double dy = y - q.y;
        const double d2 = dx * dx + dy * dy;
        if (d2 > params.radius * params.radius) continue;
        best = std::max(best, std::exp(-d2 * (1.0 / (2.0 * params.sigma * params.sigma))));
      }
      t.at(x, y) = best;
    }
  }
  return t;
}

PredictedMap infer(const ImageLattice& lattice, const InferrerParams& params) {
  PredictedMap t(lattice.shape());
  std::vector<double> patch(params.arch.input_dim());
  for (int y = 0; y < lattice.height(); ++y) {
    for (int x = 0; x < lattice.width(); ++x) {
      extract_patch(lattice, x, y, params.arch.context_radius, patch);
      t.at(x, y) = predict_pixel(params, patch);
    }
  }
  return t;
}

GradientResult gradient(const InferrerParams& p, const Minibatch& batch) {
  if (batch.size() == 0) throw ShapeError("gradient needs a non-empty minibatch");
  if (batch.input_dim() != p.arch.input_dim()) throw ShapeError("minibatch patch length mismatch");
  const std::size_t n = batch.size();
  const std::size_t hidden = p.b1.size();
  const std::size_t dim = p.arch.input_dim();
  GradientResult out{InferrerParams::zeros(p.arch), 0.0};
  InferrerParams& g = out.gradient;
  std::vector<double> act(hidden);
  double sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto x = batch.patch(k);
    double y = p.b2;
    for (std::size_t h = 0; h < hidden; ++h) {
      double z = p.b1[h];
      for (std::size_t i = 0; i < dim; ++i) z += p.w1[h * dim + i] * x[i];
      act[h] = std::tanh(z);
      y += p.w2[h] * act[h];
    }
    const double r = y - batch.target(k);
    sq += r * r;
    const double dy = 2.0 * r / static_cast<double>(n);
    g.b2 += dy;
    for (std::size_t h = 0; h < hidden; ++h) {
      g.w2[h] += dy * act[h];
      const double dz = dy * p.w2[h] * (1.0 - act[h] * act[h]);
      g.b1[h] += dz;
      for (std::size_t i = 0; i < dim; ++i) g.w1[h * dim + i] += dz * x[i];
    }
  }
  out.loss = sq / static_cast<double>(n);
  return out;
}

EncoderFit fit_encoder(std::span<const PredictedMap> maps, std::span<const PointSet> truths, const EncoderSpace& space,
                       double tau) {
  if (space.candidates.empty()) throw ConfigError("encoder space is empty");
  EncoderFit fit;
  fit.candidates = space.candidates;
  for (const EncoderParams& p : space.candidates) fit.mean_losses.push_back(mean_detection_loss(maps, truths, p, tau));
  for (std::size_t c = 1; c < fit.mean_losses.size(); ++c)
    if (fit.mean_losses[c] < fit.mean_losses[fit.best_index]) fit.best_index = c;
  fit.best = space.candidates[fit.best_index];
  return fit;
}

}  // namespace msl::serial
