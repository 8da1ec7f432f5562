#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "segre/errors.hpp"
#include "segre/presegre.hpp"

namespace segre {

inline constexpr double kOrthonormalTolerance = 1e-10;

// Two tangents at `at` that are orthonormal in the warped metric.
class CurvaturePlane {
 public:
  CurvaturePlane(PreSegreTangent first, PreSegreTangent second)
      : first_(std::move(first)), second_(std::move(second)) {
    if (!same_point(first_.base(), second_.base())) {
      throw ShapeMismatch("plane tangents are based at different points");
    }
    const double g11 = metric(first_, first_);
    const double g22 = metric(second_, second_);
    const double g12 = metric(first_, second_);
    if (std::abs(g11 - 1.0) > kOrthonormalTolerance ||
        std::abs(g22 - 1.0) > kOrthonormalTolerance ||
        std::abs(g12) > kOrthonormalTolerance) {
      throw ShapeMismatch("plane tangents are not orthonormal (g11 = " + std::to_string(g11) +
                          ", g22 = " + std::to_string(g22) + ", g12 = " + std::to_string(g12) +
                          ")");
    }
  }

  const PreSegrePoint& at() const noexcept { return first_.base(); }
  const PreSegreTangent& first() const noexcept { return first_; }
  const PreSegreTangent& second() const noexcept { return second_; }

 private:
  PreSegreTangent first_;
  PreSegreTangent second_;
};

namespace detail {

inline constexpr double kSupportTolerance = 1e-10;

// Index of the single factor carrying spherical motion, nullopt if none.
// Throws when several factors move.
inline std::optional<std::size_t> spherical_support(const PreSegreTangent& v) {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < v.factor_dots().size(); ++i) {
    if (v.factor_dot(i).norm() <= kSupportTolerance) continue;
    if (found) {
      throw UnsupportedPlane("tangent moves factors " + std::to_string(*found) + " and " +
                             std::to_string(i) + "; only single-factor directions are supported");
    }
    found = i;
  }
  return found;
}

inline bool is_radial(const PreSegreTangent& v) {
  return !spherical_support(v).has_value();
}

}  // namespace detail

// Closed-form sectional curvature on axis-aligned planes:
//   same factor i:      (1/k_i - alpha^2) / (alpha^2 lambda^2)
//   factors i != j:     -1 / lambda^2
//   radial direction:   0
inline double sectional_curvature(const CurvaturePlane& plane) {
  const PreSegrePoint& p = plane.at();
  const double lambda = p.lambda();
  const double alpha = p.shape().alpha();
  const auto i = detail::spherical_support(plane.first());
  const auto j = detail::spherical_support(plane.second());
  const bool first_radial = std::abs(plane.first().lambda_dot()) > detail::kSupportTolerance;
  const bool second_radial = std::abs(plane.second().lambda_dot()) > detail::kSupportTolerance;
  if (!i || !j) return 0.0;
  if (first_radial || second_radial) {
    throw UnsupportedPlane("tangent mixes radial and spherical components");
  }
  if (*i != *j) return -1.0 / (lambda * lambda);
  const double k = p.shape().mult(*i);
  return (1.0 / k - alpha * alpha) / (alpha * alpha * lambda * lambda);
}

inline constexpr int kDefaultCircleSamples = 2048;

// Curvature from the circumference defect of a small geodesic circle:
//   C(r) = 2 pi r (1 - K r^2 / 6 + O(r^4)).
// C is the sum of geodesic chord lengths between consecutive samples, scaled
// by (pi/n)/sin(pi/n) to undo the inscribed-polygon shortfall.
inline double estimate_curvature_bdp(const CurvaturePlane& plane, double r,
                                     int samples = kDefaultCircleSamples) {
  if (!(r > 0.0)) throw ShapeMismatch("circle radius must be positive");
  if (samples < 16) throw ShapeMismatch("need at least 16 circle samples");
  const PreSegrePoint& p = plane.at();
  const double two_pi = 2.0 * std::numbers::pi;

  auto circle_point = [&](int idx) {
    const double theta = two_pi * idx / samples;
    const PreSegreTangent v =
        plane.first().scaled(r * std::cos(theta)) + plane.second().scaled(r * std::sin(theta));
    return pre_exp(p, v);
  };

  const PreSegrePoint start = circle_point(0);
  PreSegrePoint prev = start;
  double chords = 0.0;
  for (int idx = 1; idx <= samples; ++idx) {
    PreSegrePoint next = idx == samples ? start : circle_point(idx);
    chords += pre_distance(prev, next).value;
    prev = std::move(next);
  }
  const double half_step = std::numbers::pi / samples;
  const double circumference = chords * half_step / std::sin(half_step);
  return 6.0 * (two_pi * r - circumference) / (two_pi * r * r * r);
}

}  // namespace segre
