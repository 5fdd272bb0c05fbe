#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "msl/grid.hpp"

namespace msl {

/// Patch regressor shape: a (2c+1)^2 input patch feeding one tanh hidden layer.
struct Architecture {
  int context_radius = 4;
  int hidden_units = 32;

  int patch_side() const { return 2 * context_radius + 1; }
  std::size_t input_dim() const { return static_cast<std::size_t>(patch_side()) * static_cast<std::size_t>(patch_side()); }
  void validate() const;
  friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// Weights of the inferrer. Also used as the container for gradients.
struct InferrerParams {
  Architecture arch;
  std::vector<double> w1;  // hidden_units x input_dim, row-major
  std::vector<double> b1;  // hidden_units
  std::vector<double> w2;  // hidden_units
  double b2 = 0.0;

  static InferrerParams zeros(const Architecture& arch);

  std::size_t count() const { return w1.size() + b1.size() + w2.size() + 1; }
  /// w1, b1, w2, b2 concatenated in that order.
  std::vector<double> flatten() const;
  static InferrerParams unflatten(const Architecture& arch, std::span<const double> flat);
  bool all_finite() const;

  friend bool operator==(const InferrerParams&, const InferrerParams&) = default;
};

struct TrainConfig {
  int epochs = 30;
  double learning_rate = 1e-2;
  int batch_pixels = 4096;
  std::uint64_t seed = 0;

  void validate() const;
};

/// (patch, target) pairs stored contiguously.
class Minibatch {
 public:
  explicit Minibatch(std::size_t input_dim) : input_dim_(input_dim) {}

  void add(std::span<const double> patch, double target);
  void clear() {
    patches_.clear();
    targets_.clear();
  }

  std::size_t size() const { return targets_.size(); }
  std::size_t input_dim() const { return input_dim_; }
  std::span<const double> patch(std::size_t i) const { return {patches_.data() + i * input_dim_, input_dim_}; }
  double target(std::size_t i) const { return targets_[i]; }

  /// Appends an uninitialised patch slot and returns it for filling in place.
  std::span<double> push(double target);

 private:
  std::size_t input_dim_;
  std::vector<double> patches_;
  std::vector<double> targets_;
};

struct GradientResult {
  InferrerParams gradient;
  double loss = 0.0;  // minibatch mean squared error
};

struct TrainTrace {
  std::vector<double> step_loss;
  std::vector<double> epoch_loss;
};

struct TrainResult {
  InferrerParams params;
  TrainTrace trace;
};

/// Glorot-uniform weights in (-b, b), b = sqrt(6 / (fan_in + fan_out)); zero biases.
InferrerParams init_params(const Architecture& arch, std::uint64_t seed);

/// b2 + w2 . tanh(w1 . patch + b1)
double predict_pixel(const InferrerParams& params, std::span<const double> patch);

/// Reflect index into [0, n) without repeating the edge sample: -1 -> 1, n -> n-2.
int reflect_index(int i, int n);

/// The (2c+1)^2 patch centred at (x, y), reflect-padded at the borders.
void extract_patch(const ImageLattice& lattice, int x, int y, int context_radius, std::span<double> out);

/// Lattice padded once by c pixels on every side so patches can be read by row copies.
class PaddedLattice {
 public:
  PaddedLattice(const ImageLattice& lattice, int context_radius);

  void patch(int x, int y, std::span<double> out) const;
  Shape shape() const { return shape_; }

 private:
  Shape shape_;
  int c_;
  int stride_;
  std::vector<double> values_;
};

/// Predicted target map t: predict_pixel at every pixel. Rows run in parallel.
PredictedMap infer(const ImageLattice& lattice, const InferrerParams& params);

/// Mean squared error between t and t*.
double loss_i(const PredictedMap& t, const TargetMap& t_star);

/// Exact gradient of the minibatch mean squared error. Examples are reduced
/// in fixed-size chunks in ascending order, so the result does not depend on
/// the number of threads.
GradientResult gradient(const InferrerParams& params, const Minibatch& batch);

/// Plain SGD. Each epoch is ceil(total pixels / batch_pixels) steps; each step
/// samples batch_pixels (lattice, pixel) pairs with replacement.
TrainResult train(std::span<const ImageLattice> lattices, std::span<const TargetMap> targets,
                  const Architecture& arch, const TrainConfig& cfg);

void to_json(nlohmann::json& j, const Architecture& a);
void from_json(const nlohmann::json& j, Architecture& a);
void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

}  // namespace msl
