// Walks through the main operations on a small rank-one tensor manifold.
#include <cstdio>
#include <vector>

#include "segre/curvature.hpp"
#include "segre/frechet.hpp"
#include "segre/segre.hpp"

using namespace segre;

namespace {

UnitVector unit(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return UnitVector::normalize(v);
}

}  // namespace

int main() {
  // Two order-2 factors in R^3 and R^2, warping factor 0.5.
  const ManifoldShape shape({3, 2}, {1, 1}, 0.5);
  std::printf("connectedness class: %s\n", to_string(connectedness_class(shape)));

  const SegrePoint p(PreSegrePoint(shape, 2.0, {unit({1, 0, 0}), unit({0, 1})}));
  // Same tensor as lambda * a (x) b with both factors negated.
  const SegrePoint p_flipped(PreSegrePoint(shape, 2.0, {unit({-1, 0, 0}), unit({0, -1})}));
  std::printf("sign-flipped representative is the same point: %s\n",
              approx_equal(p, p_flipped) ? "yes" : "no");

  const SegrePoint q(PreSegrePoint(shape, 3.0, {unit({0.8, 0.6, 0}), unit({-0.6, 0.8})}));
  const Distance d = segre_distance(p, q);
  std::printf("distance p -> q: %.12f (%s)\n", d.value, d.connected ? "connected" : "disconnected");

  const SegreTangent v = segre_log(p, q);
  const SegrePoint back = segre_exp(p, v);
  std::printf("exp(log) reproduces q: %s\n", approx_equal(back, q, 1e-9) ? "yes" : "no");

  // Midpoint along the geodesic equals the two-point Frechet mean.
  const SegrePoint mid = segre_exp(p, v.scaled(0.5));
  const std::vector<SegrePoint> pair{p, q};
  const SegrePoint mean = frechet_mean(pair);
  std::printf("midpoint vs two-point mean: %.3g\n", segre_distance(mid, mean).value);

  // Curvature of the plane spanned by moving one factor in two directions.
  const PreSegrePoint base = p.rep();
  const Vector e1 = (Vector(3) << 0, 1, 0).finished() / (0.5 * 2.0);
  const Vector e2 = (Vector(3) << 0, 0, 1).finished() / (0.5 * 2.0);
  const PreSegreTangent x = PreSegreTangent::project(base, 0.0, {e1, Vector::Zero(2)});
  const PreSegreTangent y = PreSegreTangent::project(base, 0.0, {e2, Vector::Zero(2)});
  const CurvaturePlane plane(x, y);
  std::printf("sectional curvature: %.6f, circle estimate at r = 0.05: %.6f\n",
              sectional_curvature(plane), estimate_curvature_bdp(plane, 0.05));
  return 0;
}
