#pragma once

// Numerical reference computations that do not go through the closed-form
// distance: quadrature of curve lengths, finite-difference speeds and a
// discrete shortest-path relaxation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "segre/errors.hpp"
#include "segre/presegre.hpp"

namespace segre {

enum class SegmentKind {
  // The geodesic t -> exp_a(t log_a(b)); requires compatible endpoints.
  Geodesic,
  // lambda linear in t, each factor moving at constant speed along the great
  // circle from a_i to b_i. Radial segments are the case a_i = b_i.
  Arc,
};

struct PolyPath {
  std::vector<PreSegrePoint> nodes;
  std::vector<SegmentKind> kinds;  // kinds[j] joins nodes[j] and nodes[j+1]

  static PolyPath uniform(std::vector<PreSegrePoint> nodes, SegmentKind kind) {
    PolyPath path{std::move(nodes), {}};
    if (!path.nodes.empty()) path.kinds.assign(path.nodes.size() - 1, kind);
    return path;
  }
};

using Curve = std::function<PreSegrePoint(double)>;

namespace detail {

// Raw coordinates of a curve point, for finite differencing.
struct Coords {
  double lambda;
  std::vector<Vector> factors;
};

inline Coords coords_of(const PreSegrePoint& p) {
  Coords c{p.lambda(), {}};
  c.factors.reserve(p.order());
  for (const auto& u : p.factors()) c.factors.push_back(u.coords());
  return c;
}

}  // namespace detail

// The curve traced by one segment, parameterized over [0, 1]. It also accepts
// parameters slightly outside that range, which central differences need.
inline Curve segment_curve(const PreSegrePoint& a, const PreSegrePoint& b, SegmentKind kind) {
  require_same_shape(a, b);
  if (kind == SegmentKind::Geodesic) {
    PreSegreTangent v = pre_log(a, b);
    return [a, v = std::move(v)](double t) { return geodesic_sample(a, v, t); };
  }
  std::vector<SphereTangent> dirs;
  dirs.reserve(a.order());
  for (std::size_t i = 0; i < a.order(); ++i) {
    dirs.push_back(sphere_log(a.factor(i), b.factor(i)));
  }
  return [a, mu = b.lambda(), dirs = std::move(dirs)](double t) {
    std::vector<UnitVector> factors;
    factors.reserve(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      factors.push_back(sphere_exp(a.factor(i), dirs[i].scaled(t)));
    }
    return PreSegrePoint(a.shape(), std::lerp(a.lambda(), mu, t), std::move(factors));
  };
}

// Warped-metric speed of `curve` at t by a central difference of step h:
//   speed^2 = lambda'^2 + (alpha lambda)^2 sum_i k_i |u_i'|^2.
inline double fd_speed(const Curve& curve, double t, double h = 1e-5) {
  const PreSegrePoint mid = curve(t);
  const detail::Coords lo = detail::coords_of(curve(t - h));
  const detail::Coords hi = detail::coords_of(curve(t + h));
  const double lambda_dot = (hi.lambda - lo.lambda) / (2.0 * h);
  double spherical = 0.0;
  for (std::size_t i = 0; i < mid.order(); ++i) {
    spherical += mid.shape().mult(i) * ((hi.factors[i] - lo.factors[i]) / (2.0 * h)).squaredNorm();
  }
  const double warp = mid.shape().alpha() * mid.lambda();
  return std::sqrt(lambda_dot * lambda_dot + warp * warp * spherical);
}

inline constexpr int kDefaultPanels = 1000;

// Composite trapezoid rule on the finite-difference speed, `panels` panels per
// segment.
inline double path_length(const PolyPath& path, int panels = kDefaultPanels) {
  if (path.nodes.size() < 2) throw ShapeMismatch("path needs at least two nodes");
  if (path.kinds.size() != path.nodes.size() - 1) {
    throw ShapeMismatch("path needs one segment kind per consecutive node pair");
  }
  if (panels < 1) throw ShapeMismatch("panels must be positive");
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < path.nodes.size(); ++j) {
    const Curve curve = segment_curve(path.nodes[j], path.nodes[j + 1], path.kinds[j]);
    const double h = 1.0 / panels;
    double sum = 0.5 * (fd_speed(curve, 0.0) + fd_speed(curve, 1.0));
    for (int s = 1; s < panels; ++s) sum += fd_speed(curve, s * h);
    total += sum * h;
  }
  return total;
}

// Radially in to radius eps, across the small sphere, and radially out:
// length lambda + mu + (alpha M - 2) eps.
inline PolyPath bypass_path(const PreSegrePoint& p, const PreSegrePoint& q, double eps) {
  require_same_shape(p, q);
  if (!(eps > 0.0) || eps >= std::min(p.lambda(), q.lambda())) {
    throw ShapeMismatch("bypass radius must lie in (0, min(lambda, mu))");
  }
  return PolyPath::uniform({p, PreSegrePoint(p.shape(), eps, p.factors()),
                            PreSegrePoint(q.shape(), eps, q.factors()), q},
                           SegmentKind::Arc);
}

struct RelaxOptions {
  int max_iters = 20000;
  double grad_tol = 1e-11;
};

struct RelaxResult {
  double length = 0.0;
  PolyPath path;
  int iterations = 0;
};

namespace detail {

// Chain of nodes (log lambda_j, s_j) in the plane spanned by the radial direction
// and the product of great-circle arcs from p to q; s = 1 is q's factors.
// Segment lengths use Simpson's rule on sqrt(dlambda^2 + (c lambda(t) ds)^2)
// with c = alpha M.
class ChainEnergy {
 public:
  ChainEnergy(double c, double lambda0, double lambda1, int nodes)
      : c_(c), lambda0_(lambda0), lambda1_(lambda1), nodes_(nodes) {}

  // x = (log lambda_1..log lambda_{n-2}, s_1..s_{n-2}); returns sum of squared
  // segment lengths and writes its gradient.
  double operator()(const std::vector<double>& x, std::vector<double>& grad) const {
    const int m = nodes_ - 2;
    grad.assign(x.size(), 0.0);
    double energy = 0.0;
    for (int j = 0; j + 1 < nodes_; ++j) {
      const double la = lam(x, j), lb = lam(x, j + 1);
      const double sa = pos(x, j), sb = pos(x, j + 1);
      double dla = 0.0, dlb = 0.0, dsa = 0.0, dsb = 0.0;
      const double len = segment(la, lb, sb - sa, dla, dlb, dsb);
      dsa = -dsb;
      energy += len * len;
      const double w = 2.0 * len;
      if (j >= 1) {
        grad[j - 1] += w * dla * la;
        grad[m + j - 1] += w * dsa;
      }
      if (j + 1 <= m) {
        grad[j] += w * dlb * lb;
        grad[m + j] += w * dsb;
      }
    }
    return energy;
  }

  double segment_length(double la, double lb, double ds) const {
    double a, b, c;
    return segment(la, lb, ds, a, b, c);
  }

 private:
  double lam(const std::vector<double>& x, int j) const {
    if (j == 0) return lambda0_;
    if (j == nodes_ - 1) return lambda1_;
    return std::exp(x[j - 1]);
  }
  double pos(const std::vector<double>& x, int j) const {
    if (j == 0) return 0.0;
    if (j == nodes_ - 1) return 1.0;
    return x[nodes_ - 2 + j - 1];
  }

  double segment(double la, double lb, double ds, double& d_la, double& d_lb,
                 double& d_sb) const {
    static constexpr double kT[3] = {0.0, 0.5, 1.0};
    static constexpr double kW[3] = {1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0};
    const double dl = lb - la;
    double len = 0.0;
    d_la = d_lb = d_sb = 0.0;
    for (int q = 0; q < 3; ++q) {
      const double t = kT[q];
      const double lt = la + t * dl;
      const double f = std::sqrt(dl * dl + c_ * c_ * lt * lt * ds * ds);
      len += kW[q] * f;
      if (f <= 1e-300) continue;
      const double cross = c_ * c_ * lt * ds * ds;
      d_la += kW[q] * (-dl + cross * (1.0 - t)) / f;
      d_lb += kW[q] * (dl + cross * t) / f;
      d_sb += kW[q] * c_ * c_ * lt * lt * ds / f;
    }
    return len;
  }

  double c_, lambda0_, lambda1_;
  int nodes_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

// Discrete shortest path between compatible p and q: `nodes` points (ends
// fixed) relaxed by nonlinear conjugate gradients on the chain energy, then
// measured with path_length over Arc segments. Interior nodes are confined to
// the surface swept by the radial ray over the product of great-circle arcs
// from p's factors to q's, which contains the minimizing geodesic.
inline RelaxResult minimize_path(const PreSegrePoint& p, const PreSegrePoint& q, int nodes,
                                 const RelaxOptions& opts = {}) {
  require_same_shape(p, q);
  if (nodes < 8) throw ShapeMismatch("minimize_path needs at least 8 nodes");
  if (!is_compatible(p, q)) {
    throw IncompatibleError(p.shape().alpha() * spherical_distance(p, q));
  }
  std::vector<SphereTangent> dirs;
  dirs.reserve(p.order());
  for (std::size_t i = 0; i < p.order(); ++i) {
    dirs.push_back(sphere_log(p.factor(i), q.factor(i)));
  }
  const double c = p.shape().alpha() * spherical_distance(p, q);
  const detail::ChainEnergy energy(c, p.lambda(), q.lambda(), nodes);

  const int m = nodes - 2;
  std::vector<double> x(2 * static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) {
    const double t = static_cast<double>(j) / (nodes - 1);
    x[j - 1] = std::log(std::lerp(p.lambda(), q.lambda(), t));
    x[m + j - 1] = t;
  }

  std::vector<double> g, g_new, dir, trial;
  energy(x, g);
  dir.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) dir[i] = -g[i];
  const double scale = std::max(p.lambda(), q.lambda());
  const auto probe = [&](double t) {
    trial = x;
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] += t * dir[i];
    energy(trial, g_new);
    return detail::dot(g_new, dir);
  };
  int iter = 0;
  bool converged = false;
  double step = 1.0;
  for (; iter < opts.max_iters; ++iter) {
    const double gnorm = std::sqrt(detail::dot(g, g));
    if (gnorm <= opts.grad_tol * scale) {
      converged = true;
      break;
    }
    double slope = detail::dot(g, dir);
    if (slope >= 0.0) {
      for (std::size_t i = 0; i < g.size(); ++i) dir[i] = -g[i];
      slope = -gnorm * gnorm;
    }
    // Root of the directional derivative, bracketed then refined by
    // safeguarded secant steps.
    double lo = 0.0, d_lo = slope;
    double hi = 2.0 * step;
    double d_hi = probe(hi);
    for (int k = 0; k < 60 && d_hi < 0.0; ++k) {
      lo = hi;
      d_lo = d_hi;
      hi *= 2.0;
      d_hi = probe(hi);
    }
    double t = hi, d_t = d_hi;
    for (int k = 0; k < 60 && d_hi >= 0.0 && std::abs(d_t) > 0.1 * std::abs(slope); ++k) {
      t = lo - d_lo * (hi - lo) / (d_hi - d_lo);
      if (!(t > lo + 0.01 * (hi - lo) && t < hi - 0.01 * (hi - lo))) t = 0.5 * (lo + hi);
      d_t = probe(t);
      if (d_t < 0.0) {
        lo = t;
        d_lo = d_t;
      } else {
        hi = t;
        d_hi = d_t;
      }
    }
    if (!(t > 0.0) || !std::isfinite(d_t)) {
      converged = gnorm <= 1e-7 * scale;
      break;
    }
    probe(t);
    step = t;
    // Polak-Ribiere+ update.
    double num = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) num += g_new[i] * (g_new[i] - g[i]);
    const double beta = std::max(0.0, num / (gnorm * gnorm));
    for (std::size_t i = 0; i < g.size(); ++i) dir[i] = -g_new[i] + beta * dir[i];
    x.swap(trial);
    g.swap(g_new);
  }
  if (!converged) {
    throw NonConvergence("minimize_path: relaxation did not converge in " +
                         std::to_string(iter) + " iterations");
  }

  std::vector<PreSegrePoint> path_nodes;
  path_nodes.reserve(static_cast<std::size_t>(nodes));
  path_nodes.push_back(p);
  for (int j = 1; j <= m; ++j) {
    std::vector<UnitVector> factors;
    factors.reserve(p.order());
    for (std::size_t i = 0; i < p.order(); ++i) {
      factors.push_back(sphere_exp(p.factor(i), dirs[i].scaled(x[m + j - 1])));
    }
    path_nodes.emplace_back(p.shape(), std::exp(x[j - 1]), std::move(factors));
  }
  path_nodes.push_back(q);
  RelaxResult result{0.0, PolyPath::uniform(std::move(path_nodes), SegmentKind::Arc), iter};
  result.length = path_length(result.path);
  return result;
}

}  // namespace segre
