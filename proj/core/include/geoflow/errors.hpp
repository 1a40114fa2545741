#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geoflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad parameter, malformed input).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Vectors or fields do not conform to the algebra / grid they are used with.
class DimensionMismatch : public InvalidArgument {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : InvalidArgument("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                        std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// Sectional curvature requested on a plane whose Gram determinant vanishes.
class DegeneratePlane : public Error {
 public:
  using Error::Error;
};

/// The requested operation has no model for this algebra (group law, distance oracle).
class UnsupportedModel : public Error {
 public:
  using Error::Error;
};

/// Integration produced a non-finite state.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace geoflow
