#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "segre/errors.hpp"

namespace segre {

using Vector = Eigen::VectorXd;

inline constexpr double kUnitTolerance = 1e-12;
// Below this distance from pi the sphere logarithm is refused.
inline constexpr double kAntipodalMargin = 1e-9;
// Below this angle theta/sin(theta) is replaced by 1.
inline constexpr double kSmallAngle = 1e-8;

// A point on the unit sphere S^{n-1}.
class UnitVector {
 public:
  explicit UnitVector(Vector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 1) throw ShapeMismatch("unit vector must be non-empty");
    const double norm = coords_.norm();
    if (!(std::abs(norm - 1.0) <= kUnitTolerance)) {
      throw ShapeMismatch("vector is not of unit norm (norm = " +
                          std::to_string(norm) + ")");
    }
  }

  // Rescales a nonzero vector onto the sphere.
  static UnitVector normalize(const Vector& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw ShapeMismatch("cannot normalize a zero or non-finite vector");
    }
    return UnitVector(v / norm, Unchecked{});
  }

  static UnitVector basis(Eigen::Index n, Eigen::Index i) {
    return UnitVector(Vector::Unit(n, i), Unchecked{});
  }

  const Vector& coords() const noexcept { return coords_; }
  Eigen::Index size() const noexcept { return coords_.size(); }
  double operator[](Eigen::Index i) const { return coords_[i]; }

  UnitVector operator-() const { return UnitVector(-coords_, Unchecked{}); }

 private:
  struct Unchecked {};
  UnitVector(Vector coords, Unchecked) : coords_(std::move(coords)) {}

  Vector coords_;
};

// A tangent vector w at `base`, i.e. <w, base> = 0.
class SphereTangent {
 public:
  SphereTangent(UnitVector base, Vector vec)
      : base_(std::move(base)), vec_(std::move(vec)) {
    if (vec_.size() != base_.size()) {
      throw ShapeMismatch("tangent and base point have different dimensions");
    }
    const double scale = std::max(1.0, vec_.norm());
    if (!(std::abs(vec_.dot(base_.coords())) <= kUnitTolerance * scale)) {
      throw ShapeMismatch("tangent vector is not orthogonal to its base point");
    }
  }

  // Orthogonal projection of an arbitrary vector onto the tangent space.
  static SphereTangent project(UnitVector base, const Vector& v) {
    if (v.size() != base.size()) {
      throw ShapeMismatch("tangent and base point have different dimensions");
    }
    Vector w = v - v.dot(base.coords()) * base.coords();
    return SphereTangent(std::move(base), std::move(w), Unchecked{});
  }

  static SphereTangent zero(UnitVector base) {
    const auto n = base.size();
    return SphereTangent(std::move(base), Vector::Zero(n), Unchecked{});
  }

  const UnitVector& base() const noexcept { return base_; }
  const Vector& vec() const noexcept { return vec_; }
  double norm() const { return vec_.norm(); }

  SphereTangent scaled(double s) const {
    return SphereTangent(base_, s * vec_, Unchecked{});
  }

 private:
  struct Unchecked {};
  SphereTangent(UnitVector base, Vector vec, Unchecked)
      : base_(std::move(base)), vec_(std::move(vec)) {}

  UnitVector base_;
  Vector vec_;
};

inline bool same_unit_vector(const UnitVector& a, const UnitVector& b,
                             double tol = kUnitTolerance) {
  return a.size() == b.size() &&
         (a.coords() - b.coords()).lpNorm<Eigen::Infinity>() <= tol;
}

// Great-circle distance in [0, pi]. Equal to acos(<u, v>) but evaluated as
// 2 atan2(|u - v|, |u + v|), which keeps full relative accuracy near 0 and pi.
inline double angle(const UnitVector& u, const UnitVector& v) {
  if (u.size() != v.size()) {
    throw ShapeMismatch("angle: dimension mismatch (" + std::to_string(u.size()) +
                        " vs " + std::to_string(v.size()) + ")");
  }
  const double diff = (u.coords() - v.coords()).norm();
  const double sum = (u.coords() + v.coords()).norm();
  return 2.0 * std::atan2(diff, sum);
}

inline UnitVector sphere_exp(const UnitVector& u, const SphereTangent& w) {
  if (!same_unit_vector(u, w.base())) {
    throw ShapeMismatch("sphere_exp: tangent is not based at u");
  }
  const double theta = w.norm();
  if (theta == 0.0) return u;
  const Vector moved =
      std::cos(theta) * u.coords() + (std::sin(theta) / theta) * w.vec();
  return UnitVector::normalize(moved);
}

inline SphereTangent sphere_log(const UnitVector& u, const UnitVector& v) {
  const double theta = angle(u, v);
  if (theta >= std::numbers::pi - kAntipodalMargin) {
    throw AntipodalError("sphere_log: antipodal points (angle " +
                         std::to_string(theta) + ")");
  }
  SphereTangent w = SphereTangent::project(u, v.coords());
  if (theta < kSmallAngle) return w;
  return w.scaled(theta / w.norm());
}

}  // namespace segre
