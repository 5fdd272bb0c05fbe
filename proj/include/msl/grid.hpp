#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "msl/error.hpp"

namespace msl {

struct Shape {
  int width = 0;
  int height = 0;

  std::size_t area() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Lattice coordinates: pixel (i, j) has its centre at (i, j).
struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

using PointSet = std::vector<Point>;

inline bool in_bounds(const Point& p, Shape s) {
  return p.x >= 0.0 && p.y >= 0.0 && p.x < s.width && p.y < s.height;
}

/// Row-major W x H grid of reals. The tag keeps lattices, learnable targets
/// and predicted targets from being mixed up.
template <class Tag>
class Grid {
 public:
  Grid() = default;
  explicit Grid(Shape shape, double fill = 0.0) : shape_(shape), values_(shape.area(), fill) {
    if (shape.width < 1 || shape.height < 1) throw ShapeError("grid dimensions must be >= 1");
  }
  Grid(Shape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
    if (shape.width < 1 || shape.height < 1) throw ShapeError("grid dimensions must be >= 1");
    if (values_.size() != shape.area()) throw ShapeError("grid value count does not match width x height");
  }

  Shape shape() const { return shape_; }
  int width() const { return shape_.width; }
  int height() const { return shape_.height; }
  std::size_t size() const { return values_.size(); }

  double& at(int x, int y) { return values_[index(x, y)]; }
  double at(int x, int y) const { return values_[index(x, y)]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(shape_.width) + static_cast<std::size_t>(x);
  }

  Shape shape_{};
  std::vector<double> values_;
};

struct LatticeTag {};
struct TargetTag {};
struct PredictedTag {};

/// Observed image d; intensities in [0,1].
using ImageLattice = Grid<LatticeTag>;
/// Learnable target t*; values in [0,1].
using TargetMap = Grid<TargetTag>;
/// Raw inferrer output t; unbounded until encoding clamps it.
using PredictedMap = Grid<PredictedTag>;

struct Sample {
  ImageLattice lattice;
  PointSet truth;
};

struct Dataset {
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

}  // namespace msl
