#pragma once

// The alpha-warped Segre-Veronese manifold of partially symmetric rank-1
// tensors, handled through canonical representatives on the pre-Segre cover.

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "segre/covering.hpp"
#include "segre/presegre.hpp"

namespace segre {

namespace detail {

inline constexpr double kSignThreshold = 1e-12;

// +1 if the first coordinate with |x| > threshold is positive, else -1.
inline int leading_sign(const UnitVector& u) {
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    if (std::abs(u[j]) > kSignThreshold) return u[j] > 0.0 ? 1 : -1;
  }
  return 1;
}

}  // namespace detail

// The deck transform taking p to the canonical representative of its fiber:
// every factor gets a positive leading coordinate, except that the last
// odd-multiplicity factor absorbs whatever sign the feasibility constraint
// forces on it.
inline SignPattern canonical_pattern(const PreSegrePoint& p) {
  const ManifoldShape& shape = p.shape();
  SignPattern s = SignPattern::identity(p.order());
  std::size_t last_odd = p.order();
  int parity = 1;
  for (std::size_t i = 0; i < p.order(); ++i) {
    s.signs[i] = detail::leading_sign(p.factor(i));
    if (shape.mult(i) % 2 == 1) {
      parity *= s.signs[i];
      last_odd = i;
    }
  }
  if (parity == -1) s.signs[last_odd] = -s.signs[last_odd];
  return s;
}

class SegrePoint {
 public:
  // Any representative of the fiber; it is replaced by the canonical one.
  explicit SegrePoint(const PreSegrePoint& any_rep)
      : rep_(apply_deck(any_rep, canonical_pattern(any_rep))) {}

  const PreSegrePoint& rep() const noexcept { return rep_; }
  const ManifoldShape& shape() const noexcept { return rep_.shape(); }
  double lambda() const noexcept { return rep_.lambda(); }

  DenseTensor tensor(std::size_t cap = kDefaultEmbedCap) const {
    return tensor_embed(rep_, cap);
  }

 private:
  PreSegrePoint rep_;
};

// Equality of the underlying tensors.
inline bool approx_equal(const SegrePoint& a, const SegrePoint& b, double tol = 1e-10) {
  if (!(a.shape() == b.shape())) return false;
  return a.tensor().max_abs_diff(b.tensor()) <= tol;
}

class SegreTangent {
 public:
  SegreTangent(SegrePoint at, PreSegreTangent coords)
      : at_(std::move(at)), coords_(std::move(coords)) {
    if (!same_point(at_.rep(), coords_.base())) {
      throw ShapeMismatch("tangent coordinates must be based at the canonical representative");
    }
  }

  // Accepts coordinates at any representative of `at` and carries them over
  // to the canonical one through the matching deck transform.
  static SegreTangent lift(const SegrePoint& at, const PreSegreTangent& coords) {
    const PreSegrePoint& base = coords.base();
    if (!(base.shape() == at.shape())) throw ShapeMismatch("tangent shape mismatch");
    SignPattern s = SignPattern::identity(base.order());
    for (std::size_t i = 0; i < base.order(); ++i) {
      s.signs[i] = base.factor(i).coords().dot(at.rep().factor(i).coords()) < 0.0 ? -1 : 1;
    }
    if (!s.is_feasible(at.shape()) || !same_point(apply_deck(base, s), at.rep(), 1e-10)) {
      throw ShapeMismatch("tangent base is not a representative of the point");
    }
    return SegreTangent(at, apply_deck(coords, s).rebased(at.rep()));
  }

  const SegrePoint& at() const noexcept { return at_; }
  const PreSegreTangent& coords() const noexcept { return coords_; }

  SegreTangent scaled(double s) const { return SegreTangent(at_, coords_.scaled(s)); }

  friend SegreTangent operator+(const SegreTangent& a, const SegreTangent& b) {
    return SegreTangent(a.at_, a.coords_ + b.coords_);
  }

 private:
  SegrePoint at_;
  PreSegreTangent coords_;
};

inline double norm(const SegreTangent& v) { return norm(v.coords()); }

inline SegreTangent zero_tangent(const SegrePoint& p) {
  return SegreTangent(p, PreSegreTangent::zero(p.rep()));
}

inline SegrePoint segre_exp(const SegrePoint& p, const SegreTangent& v) {
  if (!same_point(p.rep(), v.at().rep())) {
    throw ShapeMismatch("segre_exp: tangent is not based at p");
  }
  return SegrePoint(pre_exp(p.rep(), v.coords()));
}

inline SegreTangent segre_log(const SegrePoint& p, const SegrePoint& q) {
  require_same_shape(p.rep(), q.rep());
  const PreSegrePoint q_star = match_representatives(p.rep(), q.rep());
  const double alpha_m = p.shape().alpha() * spherical_distance(p.rep(), q_star);
  if (!(alpha_m < std::numbers::pi)) throw NotConnectedError(alpha_m);
  return SegreTangent(p, pre_log(p.rep(), q_star));
}

inline Distance segre_distance(const SegrePoint& p, const SegrePoint& q) {
  require_same_shape(p.rep(), q.rep());
  return pre_distance(p.rep(), match_representatives(p.rep(), q.rep()));
}

enum class Connectedness { Connected, NotConnected, Unknown };

inline const char* to_string(Connectedness c) {
  switch (c) {
    case Connectedness::Connected:
      return "connected";
    case Connectedness::NotConnected:
      return "not-connected";
    case Connectedness::Unknown:
      return "unknown";
  }
  return "unknown";
}

// Connected below 1/sqrt(sum k), not connected from 2/sqrt(sum k) on; the
// band in between is not classified.
inline Connectedness connectedness_class(const ManifoldShape& shape) {
  const double root = std::sqrt(static_cast<double>(shape.total_multiplicity()));
  if (shape.alpha() < 1.0 / root) return Connectedness::Connected;
  if (shape.alpha() >= 2.0 / root) return Connectedness::NotConnected;
  return Connectedness::Unknown;
}

// 1/sqrt(sum k) - sqrt(eps): the largest alpha at which every pair of rank-1
// tensors is joined by a minimizing geodesic, minus a rounding margin.
inline double auto_alpha(const std::vector<int>& mults) {
  int total = 0;
  for (int k : mults) total += k;
  return 1.0 / std::sqrt(static_cast<double>(total)) -
         std::sqrt(std::numeric_limits<double>::epsilon());
}

}  // namespace segre
