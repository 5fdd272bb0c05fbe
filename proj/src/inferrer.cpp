#include "msl/inferrer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msl/random.hpp"

namespace msl {

namespace {

constexpr std::size_t kGradientChunk = 256;

void check_patch(const InferrerParams& params, std::size_t n) {
  if (n != params.arch.input_dim())
    throw ShapeError("patch length " + std::to_string(n) + " does not match architecture input " +
                     std::to_string(params.arch.input_dim()));
}

void add_into(InferrerParams& acc, const InferrerParams& g) {
  for (std::size_t i = 0; i < acc.w1.size(); ++i) acc.w1[i] += g.w1[i];
  for (std::size_t i = 0; i < acc.b1.size(); ++i) acc.b1[i] += g.b1[i];
  for (std::size_t i = 0; i < acc.w2.size(); ++i) acc.w2[i] += g.w2[i];
  acc.b2 += g.b2;
}

// Forward and backward for examples [begin, end); `scale` is 2 / batch size.
// `w1t` is w1 transposed (input_dim x hidden) so the forward pass runs across
// hidden units; each unit still sums its inputs in ascending order. The w1
// gradient is accumulated row by row afterwards, every element still summing
// examples in ascending order.
double accumulate_range(const InferrerParams& p, std::span<const double> w1t, const Minibatch& batch,
                        std::size_t begin, std::size_t end, double scale, InferrerParams& acc) {
  const std::size_t hidden = p.b1.size();
  const std::size_t dim = p.arch.input_dim();
  const std::size_t count = end - begin;
  std::vector<double> act(hidden);
  std::vector<double> dz(count * hidden);  // example-major
  double sq = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double* x = batch.patch(begin + k).data();
    double* z = act.data();
    std::copy(p.b1.begin(), p.b1.end(), z);
    for (std::size_t i = 0; i < dim; ++i) {
      const double xi = x[i];
      const double* w = w1t.data() + i * hidden;
      for (std::size_t h = 0; h < hidden; ++h) z[h] += w[h] * xi;
    }
    double y = p.b2;
    for (std::size_t h = 0; h < hidden; ++h) {
      act[h] = std::tanh(z[h]);
      y += p.w2[h] * act[h];
    }
    const double r = y - batch.target(begin + k);
    sq += r * r;
    const double g = scale * r;
    acc.b2 += g;
    double* dzk = dz.data() + k * hidden;
    for (std::size_t h = 0; h < hidden; ++h) {
      acc.w2[h] += g * act[h];
      dzk[h] = g * p.w2[h] * (1.0 - act[h] * act[h]);
      acc.b1[h] += dzk[h];
    }
  }
  for (std::size_t h = 0; h < hidden; ++h) {
    double* gw = acc.w1.data() + h * dim;
    for (std::size_t k = 0; k < count; ++k) {
      const double d = dz[k * hidden + h];
      const double* x = batch.patch(begin + k).data();
      for (std::size_t i = 0; i < dim; ++i) gw[i] += d * x[i];
    }
  }
  return sq;
}

}  // namespace

void Architecture::validate() const {
  if (context_radius < 0) throw ConfigError("inferrer.context_radius must be >= 0");
  if (hidden_units < 1) throw ConfigError("inferrer.hidden_units must be >= 1");
}

InferrerParams InferrerParams::zeros(const Architecture& arch) {
  arch.validate();
  const auto h = static_cast<std::size_t>(arch.hidden_units);
  InferrerParams p;
  p.arch = arch;
  p.w1.assign(h * arch.input_dim(), 0.0);
  p.b1.assign(h, 0.0);
  p.w2.assign(h, 0.0);
  return p;
}

std::vector<double> InferrerParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(count());
  flat.insert(flat.end(), w1.begin(), w1.end());
  flat.insert(flat.end(), b1.begin(), b1.end());
  flat.insert(flat.end(), w2.begin(), w2.end());
  flat.push_back(b2);
  return flat;
}

InferrerParams InferrerParams::unflatten(const Architecture& arch, std::span<const double> flat) {
  InferrerParams p = zeros(arch);
  if (flat.size() != p.count())
    throw ShapeError("flat parameter count " + std::to_string(flat.size()) + " does not match architecture (" +
                     std::to_string(p.count()) + ")");
  auto it = flat.begin();
  std::copy_n(it, p.w1.size(), p.w1.begin());
  it += static_cast<std::ptrdiff_t>(p.w1.size());
  std::copy_n(it, p.b1.size(), p.b1.begin());
  it += static_cast<std::ptrdiff_t>(p.b1.size());
  std::copy_n(it, p.w2.size(), p.w2.begin());
  it += static_cast<std::ptrdiff_t>(p.w2.size());
  p.b2 = *it;
  return p;
}

bool InferrerParams::all_finite() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(w1.begin(), w1.end(), finite) && std::all_of(b1.begin(), b1.end(), finite) &&
         std::all_of(w2.begin(), w2.end(), finite) && std::isfinite(b2);
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("inferrer.epochs must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw ConfigError("inferrer.learning_rate must be a finite value >= 0");
  if (batch_pixels < 1) throw ConfigError("inferrer.batch_pixels must be >= 1");
}

void Minibatch::add(std::span<const double> patch, double target) {
  if (patch.size() != input_dim_) throw ShapeError("minibatch patch length mismatch");
  std::copy(patch.begin(), patch.end(), push(target).begin());
}

std::span<double> Minibatch::push(double target) {
  const std::size_t offset = patches_.size();
  patches_.resize(offset + input_dim_);
  targets_.push_back(target);
  return {patches_.data() + offset, input_dim_};
}

InferrerParams init_params(const Architecture& arch, std::uint64_t seed) {
  InferrerParams p = InferrerParams::zeros(arch);
  Rng rng(seed);
  const double fan_in = static_cast<double>(arch.input_dim());
  const double hidden = static_cast<double>(arch.hidden_units);
  const double b_in = std::sqrt(6.0 / (fan_in + hidden));
  const double b_out = std::sqrt(6.0 / (hidden + 1.0));
  // uniform() is in [0,1); drawing -b exactly is rejected to keep the open interval.
  const auto draw = [&rng](double b) {
    double v;
    do {
      v = rng.uniform(-b, b);
    } while (!(std::abs(v) < b));
    return v;
  };
  for (double& w : p.w1) w = draw(b_in);
  for (double& w : p.w2) w = draw(b_out);
  return p;
}

double predict_pixel(const InferrerParams& params, std::span<const double> patch) {
  check_patch(params, patch.size());
  const std::size_t dim = patch.size();
  double y = params.b2;
  for (std::size_t h = 0; h < params.b1.size(); ++h) {
    const double* w = params.w1.data() + h * dim;
    double z = params.b1[h];
    for (std::size_t i = 0; i < dim; ++i) z += w[i] * patch[i];
    y += params.w2[h] * std::tanh(z);
  }
  return y;
}

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

void extract_patch(const ImageLattice& lattice, int x, int y, int c, std::span<double> out) {
  const int side = 2 * c + 1;
  if (out.size() != static_cast<std::size_t>(side) * static_cast<std::size_t>(side))
    throw ShapeError("patch buffer has wrong length");
  std::size_t k = 0;
  for (int dy = -c; dy <= c; ++dy) {
    const int yy = reflect_index(y + dy, lattice.height());
    for (int dx = -c; dx <= c; ++dx) out[k++] = lattice.at(reflect_index(x + dx, lattice.width()), yy);
  }
}

PaddedLattice::PaddedLattice(const ImageLattice& lattice, int context_radius)
    : shape_(lattice.shape()), c_(context_radius), stride_(lattice.width() + 2 * context_radius) {
  const int rows = lattice.height() + 2 * c_;
  values_.resize(static_cast<std::size_t>(stride_) * static_cast<std::size_t>(rows));
  for (int y = 0; y < rows; ++y) {
    const int sy = reflect_index(y - c_, lattice.height());
    for (int x = 0; x < stride_; ++x)
      values_[static_cast<std::size_t>(y) * stride_ + x] = lattice.at(reflect_index(x - c_, lattice.width()), sy);
  }
}

void PaddedLattice::patch(int x, int y, std::span<double> out) const {
  const int side = 2 * c_ + 1;
  double* dst = out.data();
  for (int r = 0; r < side; ++r) {
    const double* src = values_.data() + static_cast<std::size_t>(y + r) * stride_ + x;
    std::copy_n(src, side, dst);
    dst += side;
  }
}

PredictedMap infer(const ImageLattice& lattice, const InferrerParams& params) {
  const PaddedLattice padded(lattice, params.arch.context_radius);
  PredictedMap t(lattice.shape());
  const std::size_t dim = params.arch.input_dim();
#pragma omp parallel
  {
    std::vector<double> patch(dim);
#pragma omp for schedule(static)
    for (int y = 0; y < lattice.height(); ++y) {
      for (int x = 0; x < lattice.width(); ++x) {
        padded.patch(x, y, patch);
        t.at(x, y) = predict_pixel(params, patch);
      }
    }
  }
  return t;
}

double loss_i(const PredictedMap& t, const TargetMap& t_star) {
  if (t.shape() != t_star.shape()) throw ShapeError("loss_i: predicted and target maps differ in shape");
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double d = t[i] - t_star[i];
    sum += d * d;
  }
  return sum / static_cast<double>(t.size());
}

GradientResult gradient(const InferrerParams& params, const Minibatch& batch) {
  if (batch.size() == 0) throw ShapeError("gradient needs a non-empty minibatch");
  check_patch(params, batch.input_dim());
  const std::size_t n = batch.size();
  const std::size_t chunks = (n + kGradientChunk - 1) / kGradientChunk;
  const double scale = 2.0 / static_cast<double>(n);

  const std::size_t hidden = params.b1.size();
  const std::size_t dim = params.arch.input_dim();
  std::vector<double> w1t(params.w1.size());
  for (std::size_t h = 0; h < hidden; ++h)
    for (std::size_t i = 0; i < dim; ++i) w1t[i * hidden + h] = params.w1[h * dim + i];

  std::vector<InferrerParams> partial(chunks, InferrerParams::zeros(params.arch));
  std::vector<double> sq(chunks, 0.0);
  const auto nchunks = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nchunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kGradientChunk;
    sq[static_cast<std::size_t>(c)] =
        accumulate_range(params, w1t, batch, begin, std::min(n, begin + kGradientChunk), scale, partial[static_cast<std::size_t>(c)]);
  }

  GradientResult out{InferrerParams::zeros(params.arch), 0.0};
  double total = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    add_into(out.gradient, partial[c]);
    total += sq[c];
  }
  out.loss = total / static_cast<double>(n);
  return out;
}

TrainResult train(std::span<const ImageLattice> lattices, std::span<const TargetMap> targets, const Architecture& arch,
                  const TrainConfig& cfg) {
  arch.validate();
  cfg.validate();
  if (lattices.empty()) throw ConfigError("train needs at least one lattice");
  if (lattices.size() != targets.size()) throw ShapeError("train needs one target map per lattice");
  std::vector<PaddedLattice> padded;
  padded.reserve(lattices.size());
  std::size_t total_pixels = 0;
  for (std::size_t k = 0; k < lattices.size(); ++k) {
    if (lattices[k].shape() != targets[k].shape()) throw ShapeError("lattice and target map shapes differ");
    padded.emplace_back(lattices[k], arch.context_radius);
    total_pixels += lattices[k].size();
  }

  TrainResult result{init_params(arch, cfg.seed), {}};
  InferrerParams& p = result.params;
  Rng rng(derive_seed(cfg.seed, stream::kTrain));
  const auto batch_size = static_cast<std::size_t>(cfg.batch_pixels);
  const std::size_t steps_per_epoch = (total_pixels + batch_size - 1) / batch_size;
  Minibatch batch(arch.input_dim());

  std::size_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_sum = 0.0;
    for (std::size_t s = 0; s < steps_per_epoch; ++s, ++step) {
      batch.clear();
      for (std::size_t k = 0; k < batch_size; ++k) {
        const auto li = static_cast<std::size_t>(rng.below(lattices.size()));
        const Shape shape = lattices[li].shape();
        const auto pix = rng.below(shape.area());
        const int x = static_cast<int>(pix % static_cast<std::uint64_t>(shape.width));
        const int y = static_cast<int>(pix / static_cast<std::uint64_t>(shape.width));
        padded[li].patch(x, y, batch.push(targets[li].at(x, y)));
      }
      const GradientResult g = gradient(p, batch);
      if (!std::isfinite(g.loss)) throw DivergenceError(step, "non-finite minibatch loss");
      const double lr = cfg.learning_rate;
      for (std::size_t i = 0; i < p.w1.size(); ++i) p.w1[i] -= lr * g.gradient.w1[i];
      for (std::size_t i = 0; i < p.b1.size(); ++i) p.b1[i] -= lr * g.gradient.b1[i];
      for (std::size_t i = 0; i < p.w2.size(); ++i) p.w2[i] -= lr * g.gradient.w2[i];
      p.b2 -= lr * g.gradient.b2;
      result.trace.step_loss.push_back(g.loss);
      epoch_sum += g.loss;
    }
    result.trace.epoch_loss.push_back(epoch_sum / static_cast<double>(steps_per_epoch));
  }
  if (!p.all_finite()) throw DivergenceError(step, "non-finite parameters after final update");
  return result;
}

void to_json(nlohmann::json& j, const Architecture& a) {
  j = {{"context_radius", a.context_radius}, {"hidden_units", a.hidden_units}};
}

void from_json(const nlohmann::json& j, Architecture& a) {
  a.context_radius = j.at("context_radius").get<int>();
  a.hidden_units = j.at("hidden_units").get<int>();
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = {{"epochs", c.epochs}, {"learning_rate", c.learning_rate}, {"batch_pixels", c.batch_pixels}, {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  c.epochs = j.at("epochs").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.batch_pixels = j.at("batch_pixels").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
}

}  // namespace msl
