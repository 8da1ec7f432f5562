#pragma once

// The tensor-product map
//
//   (lambda, u_1, ..., u_d)  ->  lambda u_1^{(x)k_1} (x) ... (x) u_d^{(x)k_d}
//
// from the pre-Segre-Veronese manifold onto the Segre-Veronese manifold. Its
// fibers are the orbits of the sign flips (lambda, s_1 u_1, ..., s_d u_d) with
// prod_i s_i^{k_i} = 1.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "segre/errors.hpp"
#include "segre/presegre.hpp"

namespace segre {

inline constexpr std::size_t kDefaultEmbedCap = 10'000'000;

struct SignPattern {
  std::vector<int> signs;

  static SignPattern identity(std::size_t d) { return {std::vector<int>(d, 1)}; }

  bool is_feasible(const ManifoldShape& shape) const {
    if (signs.size() != shape.order()) return false;
    int product = 1;
    for (std::size_t i = 0; i < signs.size(); ++i) {
      if (signs[i] != 1 && signs[i] != -1) return false;
      if (shape.mult(i) % 2 == 1) product *= signs[i];
    }
    return product == 1;
  }

  bool operator==(const SignPattern&) const = default;
};

// Row-major dense array with extents (n_1 x k_1 times, ..., n_d x k_d times).
struct DenseTensor {
  std::vector<std::size_t> extents;
  std::vector<double> data;

  double frobenius_norm() const {
    double s = 0.0;
    for (double x : data) s += x * x;
    return std::sqrt(s);
  }

  double dot(const DenseTensor& other) const {
    if (other.data.size() != data.size()) throw ShapeMismatch("tensor size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) s += data[i] * other.data[i];
    return s;
  }

  double max_abs_diff(const DenseTensor& other) const {
    if (other.extents != extents) throw ShapeMismatch("tensor extents differ");
    double m = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      m = std::max(m, std::abs(data[i] - other.data[i]));
    }
    return m;
  }

  DenseTensor& operator+=(const DenseTensor& other) {
    if (other.extents != extents) throw ShapeMismatch("tensor extents differ");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += other.data[i];
    return *this;
  }

  DenseTensor& operator*=(double s) {
    for (double& x : data) x *= s;
    return *this;
  }
};

// Number of entries of the dense embedding; SIZE_MAX on overflow.
inline std::size_t embedding_size(const ManifoldShape& shape) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < shape.order(); ++i) {
    for (int c = 0; c < shape.mult(i); ++c) {
      const auto n = static_cast<std::size_t>(shape.dim(i));
      if (total > std::numeric_limits<std::size_t>::max() / n) {
        return std::numeric_limits<std::size_t>::max();
      }
      total *= n;
    }
  }
  return total;
}

namespace detail {

inline void check_cap(const ManifoldShape& shape, std::size_t cap) {
  const std::size_t size = embedding_size(shape);
  if (size > cap) {
    throw SizeCapExceeded("dense embedding would have " +
                          (size == std::numeric_limits<std::size_t>::max()
                               ? std::string("more than 2^64")
                               : std::to_string(size)) +
                          " entries, cap is " + std::to_string(cap));
  }
}

// scale * v_1 (x) v_2 (x) ... (x) v_m, row-major.
inline DenseTensor outer(double scale, const std::vector<const Vector*>& vs) {
  DenseTensor t;
  t.data = {scale};
  for (const Vector* v : vs) {
    t.extents.push_back(static_cast<std::size_t>(v->size()));
    std::vector<double> next(t.data.size() * static_cast<std::size_t>(v->size()));
    std::size_t idx = 0;
    for (double x : t.data) {
      for (Eigen::Index j = 0; j < v->size(); ++j) next[idx++] = x * (*v)[j];
    }
    t.data = std::move(next);
  }
  return t;
}

// The slot list u_1 (k_1 times), ..., u_d (k_d times).
inline std::vector<const Vector*> slots(const PreSegrePoint& p) {
  std::vector<const Vector*> vs;
  for (std::size_t i = 0; i < p.order(); ++i) {
    for (int c = 0; c < p.shape().mult(i); ++c) vs.push_back(&p.factor(i).coords());
  }
  return vs;
}

}  // namespace detail

inline DenseTensor tensor_embed(const PreSegrePoint& p, std::size_t cap = kDefaultEmbedCap) {
  detail::check_cap(p.shape(), cap);
  return detail::outer(p.lambda(), detail::slots(p));
}

// nu_k(u') = u' (x) u^{(x)(k-1)} + u (x) u' (x) u^{(x)(k-2)} + ... + u^{(x)(k-1)} (x) u',
// kept as an explicit k-term sum.
inline DenseTensor nu(const UnitVector& u, const Vector& u_dot, int k) {
  if (u_dot.size() != u.size()) throw ShapeMismatch("nu: dimension mismatch");
  DenseTensor sum;
  for (int slot = 0; slot < k; ++slot) {
    std::vector<const Vector*> vs(static_cast<std::size_t>(k), &u.coords());
    vs[static_cast<std::size_t>(slot)] = &u_dot;
    DenseTensor term = detail::outer(1.0, vs);
    if (slot == 0) {
      sum = std::move(term);
    } else {
      sum += term;
    }
  }
  return sum;
}

// Differential of the tensor-product map:
//   lambda_dot U + lambda sum_i u_1^{k_1} (x) ... (x) nu_{k_i}(u'_i) (x) ... (x) u_d^{k_d}.
inline DenseTensor pushforward(const PreSegreTangent& v, std::size_t cap = kDefaultEmbedCap) {
  const PreSegrePoint& p = v.base();
  detail::check_cap(p.shape(), cap);
  const auto base_slots = detail::slots(p);
  DenseTensor result = detail::outer(v.lambda_dot(), base_slots);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < p.order(); ++i) {
    const auto k = static_cast<std::size_t>(p.shape().mult(i));
    const Vector& dot = v.factor_dot(i).vec();
    if (dot.squaredNorm() > 0.0) {
      for (std::size_t c = 0; c < k; ++c) {
        auto vs = base_slots;
        vs[offset + c] = &dot;
        result += detail::outer(p.lambda(), vs);
      }
    }
    offset += k;
  }
  return result;
}

// The alpha-warped metric of R^N_* at the point `at`, applied to two ambient
// vectors: radial components multiply plainly, components orthogonal to `at`
// are weighted by alpha^2.
inline double ambient_warped_inner(const DenseTensor& at, const DenseTensor& x,
                                   const DenseTensor& y, double alpha) {
  const double r = at.frobenius_norm();
  if (!(r > 0.0)) throw ShapeMismatch("ambient metric at the origin");
  const double xr = x.dot(at) / r;
  const double yr = y.dot(at) / r;
  const double xy = x.dot(y);
  // <x_perp, y_perp> = <x, y> - xr yr
  return xr * yr + alpha * alpha * (xy - xr * yr);
}

inline PreSegrePoint apply_deck(const PreSegrePoint& p, const SignPattern& s) {
  if (!s.is_feasible(p.shape())) {
    throw ShapeMismatch("sign pattern is not a deck transform for this shape");
  }
  std::vector<UnitVector> factors;
  factors.reserve(p.order());
  for (std::size_t i = 0; i < p.order(); ++i) {
    factors.push_back(s.signs[i] == 1 ? p.factor(i) : -p.factor(i));
  }
  return PreSegrePoint(p.shape(), p.lambda(), std::move(factors));
}

// Differential of a deck transform; it flips the same factor tangents.
inline PreSegreTangent apply_deck(const PreSegreTangent& v, const SignPattern& s) {
  PreSegrePoint base = apply_deck(v.base(), s);
  std::vector<SphereTangent> dots;
  dots.reserve(base.order());
  for (std::size_t i = 0; i < base.order(); ++i) {
    dots.emplace_back(base.factor(i), s.signs[i] * v.factor_dot(i).vec());
  }
  return PreSegreTangent(std::move(base), v.lambda_dot(), std::move(dots));
}

inline constexpr std::size_t kMaxEnumerationOrder = 20;

// All feasible sign patterns, in lexicographic order with +1 before -1 (so
// the identity comes first).
inline std::vector<SignPattern> deck_transforms(const ManifoldShape& shape) {
  const std::size_t d = shape.order();
  if (d > kMaxEnumerationOrder) {
    throw ShapeMismatch("deck transform enumeration limited to d <= 20");
  }
  std::vector<SignPattern> out;
  const std::uint64_t count = std::uint64_t{1} << d;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    SignPattern s;
    s.signs.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      // Most significant bit maps to factor 0, giving lexicographic order.
      s.signs[i] = (mask >> (d - 1 - i)) & 1U ? -1 : 1;
    }
    if (s.is_feasible(shape)) out.push_back(std::move(s));
  }
  return out;
}

// Delta_i = k_i ((theta_i - pi)^2 - theta_i^2): the change in M^2 caused by
// flipping factor i of q.
struct DeltaProfile {
  std::vector<double> deltas;
};

inline DeltaProfile delta_profile(const PreSegrePoint& p, const PreSegrePoint& q) {
  require_same_shape(p, q);
  DeltaProfile prof;
  prof.deltas.reserve(p.order());
  for (std::size_t i = 0; i < p.order(); ++i) {
    const double theta = angle(p.factor(i), q.factor(i));
    prof.deltas.push_back(p.shape().mult(i) * std::numbers::pi *
                          (std::numbers::pi - 2.0 * theta));
  }
  return prof;
}

// Linear-time choice of the sign pattern minimizing M(p_star, s(q_ref)).
inline SignPattern match_pattern(const PreSegrePoint& p_star, const PreSegrePoint& q_ref) {
  const DeltaProfile prof = delta_profile(p_star, q_ref);
  const ManifoldShape& shape = p_star.shape();
  SignPattern s;
  s.signs.resize(shape.order());
  int parity = 1;
  for (std::size_t i = 0; i < shape.order(); ++i) {
    s.signs[i] = prof.deltas[i] >= 0.0 ? 1 : -1;
    if (shape.mult(i) % 2 == 1) parity *= s.signs[i];
  }
  if (parity == 1) return s;
  // Infeasible: flip the cheapest odd-multiplicity factor. Lowest index wins ties.
  std::size_t best = shape.order();
  for (std::size_t i = 0; i < shape.order(); ++i) {
    if (shape.mult(i) % 2 == 0) continue;
    if (best == shape.order() ||
        std::abs(prof.deltas[i]) < std::abs(prof.deltas[best])) {
      best = i;
    }
  }
  s.signs[best] = -s.signs[best];
  return s;
}

inline PreSegrePoint match_representatives(const PreSegrePoint& p_star,
                                           const PreSegrePoint& q_ref) {
  return apply_deck(q_ref, match_pattern(p_star, q_ref));
}

// Exhaustive search over the fiber; kept as the reference for the linear-time
// algorithm. Ties go to the earliest pattern in deck_transforms order.
inline PreSegrePoint brute_force_match(const PreSegrePoint& p_star,
                                       const PreSegrePoint& q_ref) {
  require_same_shape(p_star, q_ref);
  if (p_star.order() > kMaxEnumerationOrder) {
    throw ShapeMismatch("brute_force_match is limited to d <= 20");
  }
  const auto patterns = deck_transforms(p_star.shape());
  std::size_t best = 0;
  double best_m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < patterns.size(); ++j) {
    const double m = spherical_distance(p_star, apply_deck(q_ref, patterns[j]));
    if (m < best_m) {
      best_m = m;
      best = j;
    }
  }
  return apply_deck(q_ref, patterns[best]);
}

}  // namespace segre
