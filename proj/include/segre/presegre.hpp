#pragma once

// Geometry of the alpha-warped pre-Segre-Veronese manifold
//
//   P = R_{>0}  x_{alpha Id}  (S^{n_1 - 1}, k_1 <.,.>) x ... x (S^{n_d - 1}, k_d <.,.>),
//
// whose points are tuples (lambda, u_1, ..., u_d). The metric is
//
//   g((x, u'_1..u'_d), (y, v'_1..v'_d)) = x y + (alpha lambda)^2 sum_i k_i <u'_i, v'_i>.
//
// All closed forms below (exp, log, distance) are evaluated directly; the
// derivation intermediates are never materialized.

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "segre/errors.hpp"
#include "segre/sphere.hpp"

namespace segre {

class ManifoldShape {
 public:
  ManifoldShape(std::vector<int> dims, std::vector<int> mults, double alpha)
      : dims_(std::move(dims)), mults_(std::move(mults)), alpha_(alpha) {
    if (dims_.empty()) throw ShapeMismatch("shape needs at least one factor");
    if (dims_.size() != mults_.size()) {
      throw ShapeMismatch("dims and mults must have the same length");
    }
    for (int n : dims_) {
      if (n < 2) throw ShapeMismatch("every factor dimension must be >= 2");
    }
    for (int k : mults_) {
      if (k < 1) throw ShapeMismatch("every multiplicity must be >= 1");
    }
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
      throw ShapeMismatch("alpha must be a positive finite number");
    }
  }

  std::size_t order() const noexcept { return dims_.size(); }
  const std::vector<int>& dims() const noexcept { return dims_; }
  const std::vector<int>& mults() const noexcept { return mults_; }
  int dim(std::size_t i) const { return dims_.at(i); }
  int mult(std::size_t i) const { return mults_.at(i); }
  double alpha() const noexcept { return alpha_; }

  int total_multiplicity() const {
    return std::accumulate(mults_.begin(), mults_.end(), 0);
  }

  ManifoldShape with_alpha(double alpha) const {
    return ManifoldShape(dims_, mults_, alpha);
  }

  bool operator==(const ManifoldShape&) const = default;

 private:
  std::vector<int> dims_;
  std::vector<int> mults_;
  double alpha_;
};

class PreSegrePoint {
 public:
  PreSegrePoint(ManifoldShape shape, double lambda, std::vector<UnitVector> factors)
      : shape_(std::move(shape)), lambda_(lambda), factors_(std::move(factors)) {
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) {
      throw ShapeMismatch("lambda must be positive and finite");
    }
    if (factors_.size() != shape_.order()) {
      throw ShapeMismatch("expected " + std::to_string(shape_.order()) +
                          " factors, got " + std::to_string(factors_.size()));
    }
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i].size() != shape_.dim(i)) {
        throw ShapeMismatch("factor " + std::to_string(i) + " has dimension " +
                            std::to_string(factors_[i].size()) + ", expected " +
                            std::to_string(shape_.dim(i)));
      }
    }
  }

  const ManifoldShape& shape() const noexcept { return shape_; }
  double lambda() const noexcept { return lambda_; }
  const std::vector<UnitVector>& factors() const noexcept { return factors_; }
  const UnitVector& factor(std::size_t i) const { return factors_.at(i); }
  std::size_t order() const noexcept { return factors_.size(); }

 private:
  ManifoldShape shape_;
  double lambda_;
  std::vector<UnitVector> factors_;
};

inline void require_same_shape(const PreSegrePoint& p, const PreSegrePoint& q) {
  if (!(p.shape() == q.shape())) throw ShapeMismatch("points have different shapes");
}

inline bool same_point(const PreSegrePoint& p, const PreSegrePoint& q,
                       double tol = kUnitTolerance) {
  if (!(p.shape() == q.shape())) return false;
  if (std::abs(p.lambda() - q.lambda()) > tol * std::max(1.0, p.lambda())) return false;
  for (std::size_t i = 0; i < p.order(); ++i) {
    if (!same_unit_vector(p.factor(i), q.factor(i), tol)) return false;
  }
  return true;
}

// Tangent vector (lambda_dot, u'_1, ..., u'_d) at `base`.
class PreSegreTangent {
 public:
  PreSegreTangent(PreSegrePoint base, double lambda_dot,
                  std::vector<SphereTangent> factor_dots)
      : base_(std::move(base)),
        lambda_dot_(lambda_dot),
        factor_dots_(std::move(factor_dots)) {
    if (!std::isfinite(lambda_dot_)) throw ShapeMismatch("lambda_dot must be finite");
    if (factor_dots_.size() != base_.order()) {
      throw ShapeMismatch("tangent has the wrong number of factors");
    }
    for (std::size_t i = 0; i < factor_dots_.size(); ++i) {
      if (!same_unit_vector(factor_dots_[i].base(), base_.factor(i))) {
        throw ShapeMismatch("factor tangent " + std::to_string(i) +
                            " is not based at the base point's factor");
      }
    }
  }

  static PreSegreTangent zero(PreSegrePoint base) {
    std::vector<SphereTangent> dots;
    dots.reserve(base.order());
    for (const auto& u : base.factors()) dots.push_back(SphereTangent::zero(u));
    return PreSegreTangent(std::move(base), 0.0, std::move(dots));
  }

  static PreSegreTangent radial(PreSegrePoint base, double lambda_dot) {
    PreSegreTangent t = zero(std::move(base));
    t.lambda_dot_ = lambda_dot;
    return t;
  }

  // Builds a tangent from raw vectors, projecting each onto u_i^perp.
  static PreSegreTangent project(PreSegrePoint base, double lambda_dot,
                                 const std::vector<Vector>& vecs) {
    if (vecs.size() != base.order()) {
      throw ShapeMismatch("tangent has the wrong number of factors");
    }
    std::vector<SphereTangent> dots;
    dots.reserve(vecs.size());
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      dots.push_back(SphereTangent::project(base.factor(i), vecs[i]));
    }
    return PreSegreTangent(std::move(base), lambda_dot, std::move(dots));
  }

  const PreSegrePoint& base() const noexcept { return base_; }
  double lambda_dot() const noexcept { return lambda_dot_; }
  const std::vector<SphereTangent>& factor_dots() const noexcept { return factor_dots_; }
  const SphereTangent& factor_dot(std::size_t i) const { return factor_dots_.at(i); }

  // Same components attached to a numerically coincident base point.
  PreSegreTangent rebased(PreSegrePoint base) const {
    if (!same_point(base, base_, 1e-10)) {
      throw ShapeMismatch("rebased: base points do not coincide");
    }
    std::vector<Vector> vecs;
    vecs.reserve(factor_dots_.size());
    for (const auto& w : factor_dots_) vecs.push_back(w.vec());
    return project(std::move(base), lambda_dot_, vecs);
  }

  PreSegreTangent scaled(double s) const {
    std::vector<SphereTangent> dots;
    dots.reserve(factor_dots_.size());
    for (const auto& w : factor_dots_) dots.push_back(w.scaled(s));
    return PreSegreTangent(base_, s * lambda_dot_, std::move(dots), Unchecked{});
  }

  friend PreSegreTangent operator+(const PreSegreTangent& a, const PreSegreTangent& b) {
    return combine(a, b, 1.0);
  }
  friend PreSegreTangent operator-(const PreSegreTangent& a, const PreSegreTangent& b) {
    return combine(a, b, -1.0);
  }

 private:
  struct Unchecked {};
  PreSegreTangent(PreSegrePoint base, double lambda_dot,
                  std::vector<SphereTangent> factor_dots, Unchecked)
      : base_(std::move(base)),
        lambda_dot_(lambda_dot),
        factor_dots_(std::move(factor_dots)) {}

  static PreSegreTangent combine(const PreSegreTangent& a, const PreSegreTangent& b,
                                 double sign) {
    if (!same_point(a.base_, b.base_)) {
      throw ShapeMismatch("cannot combine tangents at different base points");
    }
    std::vector<SphereTangent> dots;
    dots.reserve(a.factor_dots_.size());
    for (std::size_t i = 0; i < a.factor_dots_.size(); ++i) {
      dots.push_back(SphereTangent::project(
          a.base_.factor(i), a.factor_dots_[i].vec() + sign * b.factor_dots_[i].vec()));
    }
    return PreSegreTangent(a.base_, a.lambda_dot_ + sign * b.lambda_dot_,
                           std::move(dots), Unchecked{});
  }

  PreSegrePoint base_;
  double lambda_dot_;
  std::vector<SphereTangent> factor_dots_;
};

inline double metric(const PreSegreTangent& x, const PreSegreTangent& y) {
  if (!same_point(x.base(), y.base())) {
    throw ShapeMismatch("metric: tangents are based at different points");
  }
  const PreSegrePoint& p = x.base();
  const double warp = p.shape().alpha() * p.lambda();
  double spherical = 0.0;
  for (std::size_t i = 0; i < p.order(); ++i) {
    spherical += p.shape().mult(i) * x.factor_dot(i).vec().dot(y.factor_dot(i).vec());
  }
  return x.lambda_dot() * y.lambda_dot() + warp * warp * spherical;
}

inline double norm(const PreSegreTangent& v) { return std::sqrt(metric(v, v)); }

// Spherical speed aggregate N = sqrt(sum_i k_i |u'_i|^2) and the angle a_i that
// the exponential map advances factor i by.
struct GeodesicCoefficients {
  double big_n = 0.0;
  std::vector<double> a;
};

inline GeodesicCoefficients geodesic_coefficients(const PreSegreTangent& v) {
  const PreSegrePoint& p = v.base();
  const double alpha = p.shape().alpha();
  const double lambda = p.lambda();
  GeodesicCoefficients c;
  c.a.assign(p.order(), 0.0);
  double n2 = 0.0;
  for (std::size_t i = 0; i < p.order(); ++i) {
    n2 += p.shape().mult(i) * v.factor_dot(i).vec().squaredNorm();
  }
  c.big_n = std::sqrt(n2);
  if (c.big_n == 0.0) return c;
  // pi/2 - atan((lambda + lambda_dot) / (lambda alpha N)), written as an atan2
  // so that it stays accurate when lambda + lambda_dot <= 0.
  const double sweep = std::atan2(lambda * alpha * c.big_n, lambda + v.lambda_dot());
  for (std::size_t i = 0; i < p.order(); ++i) {
    c.a[i] = v.factor_dot(i).norm() / (alpha * c.big_n) * sweep;
  }
  return c;
}

inline PreSegrePoint pre_exp(const PreSegrePoint& p, const PreSegreTangent& v) {
  if (!same_point(p, v.base())) throw ShapeMismatch("pre_exp: tangent is not based at p");
  const double lambda = p.lambda();
  const GeodesicCoefficients c = geodesic_coefficients(v);
  if (c.big_n == 0.0) {
    if (v.lambda_dot() <= -lambda + 1e-12) {
      throw DomainError("pre_exp: radial tangent lambda_dot = " +
                        std::to_string(v.lambda_dot()) +
                        " reaches the origin from lambda = " + std::to_string(lambda));
    }
    return PreSegrePoint(p.shape(), lambda + v.lambda_dot(), p.factors());
  }
  const double radius =
      std::hypot(lambda + v.lambda_dot(), lambda * p.shape().alpha() * c.big_n);
  std::vector<UnitVector> factors;
  factors.reserve(p.order());
  for (std::size_t i = 0; i < p.order(); ++i) {
    const SphereTangent& w = v.factor_dot(i);
    const double speed = w.norm();
    if (speed == 0.0) {
      factors.push_back(p.factor(i));
    } else {
      factors.push_back(sphere_exp(p.factor(i), w.scaled(c.a[i] / speed)));
    }
  }
  return PreSegrePoint(p.shape(), radius, std::move(factors));
}

// gamma(t) = exp_p(t v).
inline PreSegrePoint geodesic_sample(const PreSegrePoint& p, const PreSegreTangent& v,
                                     double t) {
  if (t == 0.0) return p;
  return pre_exp(p, v.scaled(t));
}

inline double spherical_distance(const PreSegrePoint& p, const PreSegrePoint& q) {
  require_same_shape(p, q);
  double m2 = 0.0;
  for (std::size_t i = 0; i < p.order(); ++i) {
    const double theta = angle(p.factor(i), q.factor(i));
    m2 += p.shape().mult(i) * theta * theta;
  }
  return std::sqrt(m2);
}

// Strict: alpha * M == pi counts as incompatible.
inline bool is_compatible(const PreSegrePoint& p, const PreSegrePoint& q) {
  return p.shape().alpha() * spherical_distance(p, q) < std::numbers::pi;
}

namespace detail {
// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) {
  return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}
}  // namespace detail

inline PreSegreTangent pre_log(const PreSegrePoint& p, const PreSegrePoint& q) {
  require_same_shape(p, q);
  const double alpha = p.shape().alpha();
  const double lambda = p.lambda();
  const double mu = q.lambda();

  std::vector<double> angles(p.order());
  double m2 = 0.0;
  for (std::size_t i = 0; i < p.order(); ++i) {
    angles[i] = angle(p.factor(i), q.factor(i));
    m2 += p.shape().mult(i) * angles[i] * angles[i];
  }
  const double m = std::sqrt(m2);
  const double alpha_m = alpha * m;
  if (!(alpha_m < std::numbers::pi)) throw IncompatibleError(alpha_m);
  for (std::size_t i = 0; i < p.order(); ++i) {
    if (angles[i] >= std::numbers::pi - kAntipodalMargin) {
      throw AntipodalFactorError(i, angles[i]);
    }
  }
  if (m == 0.0) return PreSegreTangent::radial(p, mu - lambda);

  // u'_i = log_{u_i}(v_i) * mu sin(alpha M) / (lambda alpha M)
  const double spherical_scale = mu / lambda * detail::sinc(alpha_m);
  std::vector<SphereTangent> dots;
  dots.reserve(p.order());
  for (std::size_t i = 0; i < p.order(); ++i) {
    dots.push_back(sphere_log(p.factor(i), q.factor(i)).scaled(spherical_scale));
  }
  return PreSegreTangent(p, mu * std::cos(alpha_m) - lambda, std::move(dots));
}

struct Distance {
  double value = 0.0;
  bool connected = true;
};

// Law of cosines with opening angle alpha*M for compatible points, written as
// sqrt((lambda - mu)^2 + 4 lambda mu sin^2(alpha M / 2)); lambda + mu (an
// infimum that no curve attains) for incompatible ones.
inline Distance pre_distance(const PreSegrePoint& p, const PreSegrePoint& q) {
  const double alpha_m = p.shape().alpha() * spherical_distance(p, q);
  const double lambda = p.lambda();
  const double mu = q.lambda();
  if (alpha_m < std::numbers::pi) {
    const double s = std::sin(alpha_m / 2.0);
    return {std::sqrt((lambda - mu) * (lambda - mu) + 4.0 * lambda * mu * s * s), true};
  }
  return {lambda + mu, false};
}

}  // namespace segre
