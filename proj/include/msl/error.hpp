#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied configuration; the message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class PlacementError : public Error {
 public:
  using Error::Error;
};

class VariantMismatch : public Error {
 public:
  using Error::Error;
};

/// Array or patch dimensions disagree with what an operation expects.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t step, const std::string& what)
      : Error("training diverged at step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A file a command depends on is absent or unreadable.
class MissingArtifact : public Error {
 public:
  using Error::Error;
};

}  // namespace msl
