#pragma once

// Frechet mean on the Segre-Veronese manifold: an inductive warm start
// (successive geodesic interpolation) followed by Riemannian gradient descent
// on sum_i dist(m, x_i)^2.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "segre/errors.hpp"
#include "segre/segre.hpp"

namespace segre {

struct MeanConfig {
  int max_iters = 200;
  double grad_tol = 1e-9;
  double step = 1.0;
  std::optional<std::uint64_t> shuffle_seed;

  void validate() const {
    if (max_iters < 1) throw ShapeMismatch("max_iters must be >= 1");
    if (!(grad_tol > 0.0)) throw ShapeMismatch("grad_tol must be positive");
    if (!(step > 0.0 && step <= 1.0)) throw ShapeMismatch("step must lie in (0, 1]");
  }
};

class MaxItersExceeded : public NonConvergence {
 public:
  MaxItersExceeded(SegrePoint last, double grad_norm, int iters)
      : NonConvergence("mean did not reach the gradient tolerance after " +
                       std::to_string(iters) + " iterations (gradient norm " +
                       std::to_string(grad_norm) + ")"),
        last_(std::move(last)),
        grad_norm_(grad_norm) {}

  const SegrePoint& last_iterate() const noexcept { return last_; }
  double grad_norm() const noexcept { return grad_norm_; }

 private:
  SegrePoint last_;
  double grad_norm_;
};

namespace detail {

// Balanced pairwise sum; the tree shape depends only on the length, so the
// result is reproducible.
inline PreSegreTangent tree_sum(std::span<const PreSegreTangent> terms) {
  if (terms.size() == 1) return terms.front();
  const std::size_t half = terms.size() / 2;
  return tree_sum(terms.first(half)) + tree_sum(terms.subspan(half));
}

inline std::vector<std::size_t> visiting_order(std::size_t n, const MeanConfig& cfg) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (cfg.shuffle_seed) {
    std::mt19937_64 rng(*cfg.shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

inline void require_points(std::span<const SegrePoint> points) {
  if (points.empty()) throw ShapeMismatch("mean of an empty point set");
  for (const auto& x : points) require_same_shape(points.front().rep(), x.rep());
}

}  // namespace detail

// m_1 = x_1, m_j = exp(m_{j-1}, log(m_{j-1}, x_j) / j).
inline SegrePoint inductive_mean(std::span<const SegrePoint> points, const MeanConfig& cfg = {}) {
  cfg.validate();
  detail::require_points(points);
  const auto order = detail::visiting_order(points.size(), cfg);
  SegrePoint m = points[order[0]];
  for (std::size_t j = 1; j < order.size(); ++j) {
    const SegreTangent v = segre_log(m, points[order[j]]);
    m = segre_exp(m, v.scaled(1.0 / static_cast<double>(j + 1)));
  }
  return m;
}

// (1/n) sum_i log_m(x_i), the negative half-gradient of the mean objective.
inline SegreTangent mean_log(const SegrePoint& m, std::span<const SegrePoint> points) {
  detail::require_points(points);
  std::vector<PreSegreTangent> logs;
  logs.reserve(points.size());
  for (const auto& x : points) logs.push_back(segre_log(m, x).coords());
  return SegreTangent(m, detail::tree_sum(logs).scaled(1.0 / static_cast<double>(points.size())));
}

inline double frechet_objective(const SegrePoint& m, std::span<const SegrePoint> points) {
  double sum = 0.0;
  for (const auto& x : points) {
    const double d = segre_distance(m, x).value;
    sum += d * d;
  }
  return sum;
}

struct MeanReport {
  SegrePoint mean;
  int iterations = 0;
  double grad_norm = 0.0;
  std::vector<double> objective_history;  // one entry per visited iterate
  bool converged = false;
};

// Runs the gradient iteration without throwing on the iteration cap.
inline MeanReport refine_mean_report(std::span<const SegrePoint> points, const SegrePoint& init,
                                     const MeanConfig& cfg = {}) {
  cfg.validate();
  detail::require_points(points);
  require_same_shape(init.rep(), points.front().rep());
  MeanReport report{init, 0, 0.0, {}, false};
  for (;;) {
    const SegreTangent g = mean_log(report.mean, points);
    report.grad_norm = norm(g);
    report.objective_history.push_back(frechet_objective(report.mean, points));
    if (report.grad_norm <= cfg.grad_tol) {
      report.converged = true;
      return report;
    }
    if (report.iterations >= cfg.max_iters) return report;
    report.mean = segre_exp(report.mean, g.scaled(cfg.step));
    ++report.iterations;
  }
}

inline SegrePoint refine_mean(std::span<const SegrePoint> points, const SegrePoint& init,
                              const MeanConfig& cfg = {}) {
  MeanReport report = refine_mean_report(points, init, cfg);
  if (!report.converged) {
    throw MaxItersExceeded(std::move(report.mean), report.grad_norm, report.iterations);
  }
  return std::move(report.mean);
}

inline SegrePoint frechet_mean(std::span<const SegrePoint> points, const MeanConfig& cfg = {}) {
  return refine_mean(points, inductive_mean(points, cfg), cfg);
}

}  // namespace segre
