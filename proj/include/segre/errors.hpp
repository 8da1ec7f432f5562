#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace segre {

// Malformed input: wrong dimensions, non-unit vectors, shapes that do not
// agree. These are caller bugs rather than properties of the geometry.
class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failures that are a property of the points involved. The CLI maps every
// GeometryError to exit code 3.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sphere logarithm of (nearly) antipodal unit vectors.
class AntipodalError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// Logarithm on the product of spheres where one factor pair is antipodal.
class AntipodalFactorError : public GeometryError {
 public:
  AntipodalFactorError(std::size_t factor, double angle)
      : GeometryError("factor " + std::to_string(factor) +
                      " is antipodal (angle " + std::to_string(angle) +
                      "); the connecting geodesic is not unique"),
        factor_(factor) {}
  std::size_t factor() const noexcept { return factor_; }

 private:
  std::size_t factor_;
};

// Exponential map evaluated on the ray that runs into the origin.
class DomainError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// Two pre-Segre points with alpha * M >= pi.
class IncompatibleError : public GeometryError {
 public:
  explicit IncompatibleError(double alpha_m)
      : GeometryError("points are not alpha-compatible: alpha*M = " +
                      std::to_string(alpha_m) + " >= pi = 3.141593"),
        alpha_m_(alpha_m) {}
  double alpha_m() const noexcept { return alpha_m_; }

 private:
  double alpha_m_;
};

// Two rank-1 tensors whose matched representatives are incompatible, so no
// minimizing geodesic joins them.
class NotConnectedError : public GeometryError {
 public:
  explicit NotConnectedError(double alpha_m)
      : GeometryError("no minimizing geodesic: matched representatives have "
                      "alpha*M = " +
                      std::to_string(alpha_m) + " >= pi = 3.141593"),
        alpha_m_(alpha_m) {}
  double alpha_m() const noexcept { return alpha_m_; }

 private:
  double alpha_m_;
};

class SizeCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class UnsupportedPlane : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative procedures that ran out of iterations. The CLI maps it to exit
// code 4.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace segre
