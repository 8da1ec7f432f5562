#include <gtest/gtest.h>

#include <cmath>

#include "segre/curvature.hpp"
#include "test_support.hpp"

namespace segre {
namespace {

using testing::Rng;

// Unit spherical tangent in factor i, direction orthogonal to `avoid` too.
PreSegreTangent unit_in_factor(Rng& rng, const PreSegrePoint& p, std::size_t i,
                               const Vector* avoid = nullptr) {
  Vector w = testing::random_orthogonal_unit(rng, p.factor(i));
  if (avoid != nullptr) {
    w -= w.dot(*avoid) * *avoid;
    w /= w.norm();
  }
  std::vector<Vector> vecs;
  for (std::size_t j = 0; j < p.order(); ++j) vecs.push_back(Vector::Zero(p.factor(j).size()));
  const double scale = p.shape().alpha() * p.lambda() * std::sqrt(p.shape().mult(i));
  vecs[i] = w / scale;
  return PreSegreTangent::project(p, 0.0, vecs);
}

CurvaturePlane same_factor_plane(Rng& rng, const PreSegrePoint& p, std::size_t i) {
  const PreSegreTangent a = unit_in_factor(rng, p, i);
  const Vector dir = a.factor_dot(i).vec().normalized();
  return CurvaturePlane(a, unit_in_factor(rng, p, i, &dir));
}

TEST(CurvaturePlane, RequiresOrthonormality) {
  Rng rng(30);
  const ManifoldShape s({3, 3}, {1, 1}, 0.7);
  const PreSegrePoint p = testing::random_point(rng, s);
  const PreSegreTangent a = unit_in_factor(rng, p, 0);
  EXPECT_THROW(CurvaturePlane(a, a), ShapeMismatch);
  EXPECT_THROW(CurvaturePlane(a, a.scaled(2.0)), ShapeMismatch);
  EXPECT_NO_THROW(CurvaturePlane(a, unit_in_factor(rng, p, 1)));
}

TEST(SectionalCurvature, PaperBranchValues) {
  Rng rng(31);
  const ManifoldShape euclid({3, 3}, {1, 1}, 1.0);
  const PreSegrePoint p(euclid, 1.0, {UnitVector::basis(3, 0), UnitVector::basis(3, 0)});
  EXPECT_NEAR(sectional_curvature(same_factor_plane(rng, p, 0)), 0.0, 1e-15);
  EXPECT_NEAR(sectional_curvature(CurvaturePlane(unit_in_factor(rng, p, 0), unit_in_factor(rng, p, 1))),
              -1.0, 1e-15);
  const ManifoldShape half({3, 3}, {1, 1}, 0.5);
  const PreSegrePoint q(half, 2.0, {UnitVector::basis(3, 0), UnitVector::basis(3, 1)});
  EXPECT_NEAR(sectional_curvature(same_factor_plane(rng, q, 1)), 0.75, 1e-14);
}

TEST(SectionalCurvature, RadialPlanesAreFlat) {
  Rng rng(32);
  const ManifoldShape s({2, 4}, {1, 2}, 1.3);
  const PreSegrePoint p = testing::random_point(rng, s);
  const CurvaturePlane plane(PreSegreTangent::radial(p, 1.0), unit_in_factor(rng, p, 1));
  EXPECT_EQ(sectional_curvature(plane), 0.0);
}

TEST(SectionalCurvature, SignPatternAndScaling) {
  Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const double alpha = testing::uniform(rng, 0.1, 2.0);
    const double lambda = testing::uniform(rng, 0.2, 5.0);
    const ManifoldShape s({3, 3}, {1, 1}, alpha);
    const PreSegrePoint p(s, lambda, {testing::random_unit(rng, 3), testing::random_unit(rng, 3)});
    const double same = sectional_curvature(same_factor_plane(rng, p, 0));
    EXPECT_EQ(same > 0.0, alpha < 1.0);
    EXPECT_NEAR(same, (1 - alpha * alpha) / (alpha * alpha * lambda * lambda), 1e-12 * std::abs(same) + 1e-14);
    const double cross =
        sectional_curvature(CurvaturePlane(unit_in_factor(rng, p, 0), unit_in_factor(rng, p, 1)));
    EXPECT_NEAR(cross, -1.0 / (lambda * lambda), 1e-13);
    const PreSegrePoint scaled(s, 3.0 * lambda, p.factors());
    const double same_scaled = sectional_curvature(same_factor_plane(rng, scaled, 0));
    EXPECT_NEAR(same_scaled * 9.0, same, 1e-12 * std::max(1.0, std::abs(same)));
  }
}

TEST(SectionalCurvature, MultiplicityRescalesFactorCurvature) {
  // Factor i carries the round metric scaled by k_i, of curvature 1/k_i.
  Rng rng(34);
  const ManifoldShape s({4}, {3}, 0.4);
  const PreSegrePoint p = testing::random_point(rng, s, 1.5, 1.5);
  const double expected = (1.0 / 3.0 - 0.16) / (0.16 * 1.5 * 1.5);
  const CurvaturePlane plane = same_factor_plane(rng, p, 0);
  EXPECT_NEAR(sectional_curvature(plane), expected, 1e-13);
  EXPECT_NEAR(estimate_curvature_bdp(plane, 0.01 * p.lambda()), expected,
              0.05 * std::abs(expected) + 0.05);
}

TEST(SectionalCurvature, RejectsMixedPlanes) {
  Rng rng(35);
  const ManifoldShape s({3, 3}, {1, 1}, 0.8);
  const PreSegrePoint p = testing::random_point(rng, s);
  const PreSegreTangent a = unit_in_factor(rng, p, 0);
  const PreSegreTangent b = unit_in_factor(rng, p, 1);
  const PreSegreTangent mixed = (a + b).scaled(1.0 / std::sqrt(2.0));
  const PreSegreTangent other = (a - b).scaled(1.0 / std::sqrt(2.0));
  EXPECT_THROW(sectional_curvature(CurvaturePlane(mixed, other)), UnsupportedPlane);
}

TEST(BdpEstimator, FlatPuncturedPlane) {
  const ManifoldShape s({2}, {1}, 1.0);
  const PreSegrePoint p(s, 1.0, {UnitVector::basis(2, 0)});
  Rng rng(36);
  const CurvaturePlane plane(PreSegreTangent::radial(p, 1.0), unit_in_factor(rng, p, 0));
  EXPECT_NEAR(estimate_curvature_bdp(plane, 0.01), 0.0, 0.05);
}

TEST(BdpEstimator, AgreesWithClosedFormOnRandomPlanes) {
  Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const double alpha = testing::uniform(rng, 0.3, 1.8);
    const ManifoldShape s({3, 4}, {1, 1}, alpha);
    const PreSegrePoint p = testing::random_point(rng, s, 0.5, 3.0);
    const int kind = trial % 3;
    const CurvaturePlane plane =
        kind == 0 ? same_factor_plane(rng, p, trial % 2)
        : kind == 1 ? CurvaturePlane(unit_in_factor(rng, p, 0), unit_in_factor(rng, p, 1))
                    : CurvaturePlane(PreSegreTangent::radial(p, 1.0), unit_in_factor(rng, p, 1));
    const double k = sectional_curvature(plane);
    EXPECT_NEAR(estimate_curvature_bdp(plane, 0.01 * p.lambda()), k, 0.05 * std::abs(k) + 0.05)
        << "alpha " << alpha << " lambda " << p.lambda() << " kind " << kind;
  }
}

}  // namespace
}  // namespace segre
