#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "segre/segre.hpp"
#include "test_support.hpp"

namespace segre {
namespace {

using testing::Rng;

Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

TEST(SegrePoint, CanonicalRepresentativeIsFiberIndependent) {
  Rng rng(20);
  for (int trial = 0; trial < 100; ++trial) {
    const ManifoldShape s = testing::random_shape(rng, 4, 4, 3, 1.0);
    const PreSegrePoint p = testing::random_point(rng, s);
    const SegrePoint a(p);
    const SegrePoint b(apply_deck(p, testing::random_deck(rng, s)));
    EXPECT_LE(testing::max_coord_gap(a.rep(), b.rep()), 0.0);
    EXPECT_TRUE(approx_equal(a, b));
  }
}

TEST(SegrePoint, CanonicalLeadingSigns) {
  const ManifoldShape s({2, 2}, {1, 2}, 1.0);
  const SegrePoint p(PreSegrePoint(s, 1.0, {UnitVector::basis(2, 0), -UnitVector::basis(2, 1)}));
  EXPECT_GT(p.rep().factor(0)[0], 0.0);
  EXPECT_GT(p.rep().factor(1)[1], 0.0);
}

TEST(SegreExp, ZeroAndRadialTangents) {
  const ManifoldShape s({2, 3}, {1, 2}, 0.5);
  const SegrePoint p(PreSegrePoint(s, 1.0, {UnitVector::basis(2, 0), UnitVector::basis(3, 1)}));
  EXPECT_TRUE(approx_equal(segre_exp(p, zero_tangent(p)), p, 0.0));
  const SegrePoint q = segre_exp(p, SegreTangent(p, PreSegreTangent::radial(p.rep(), 1.0)));
  EXPECT_DOUBLE_EQ(q.lambda(), 2.0);
}

TEST(SegreExp, EmbeddingMatchesPreExp) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const ManifoldShape s = testing::random_shape(rng, 3, 4, 2, testing::uniform(rng, 0.2, 1.5));
    if (embedding_size(s) > 10'000) continue;
    const SegrePoint p(testing::random_point(rng, s));
    const PreSegreTangent v = testing::random_tangent(rng, p.rep(), 0.5);
    const SegrePoint q = segre_exp(p, SegreTangent(p, v));
    EXPECT_LE(q.tensor().max_abs_diff(tensor_embed(pre_exp(p.rep(), v))), 1e-12);
  }
}

TEST(SegreLog, EqualTensorsGiveZeroTangent) {
  // (0,-1) x (-1,0) is a deck image of (0,1) x (1,0): the same tensor.
  const ManifoldShape s({2, 2}, {1, 1}, 1.0);
  const PreSegrePoint p_rep(s, 1.0, {UnitVector(vec2(0, 1)), UnitVector(vec2(1, 0))});
  const PreSegrePoint q_rep(s, 1.0, {UnitVector(vec2(0, -1)), UnitVector(vec2(-1, 0))});
  EXPECT_LE(tensor_embed(p_rep).max_abs_diff(tensor_embed(q_rep)), 0.0);
  const SegrePoint p(p_rep), q(q_rep);
  EXPECT_EQ(norm(segre_log(p, q)), 0.0);
  // The unmatched representatives are antipodal in both factors.
  EXPECT_THROW(pre_log(p_rep, q_rep), IncompatibleError);
}

TEST(SegreLog, RightAnglePairDisconnectedAboveThreshold) {
  const ManifoldShape s({2, 2, 2}, {1, 1, 1}, 2.0 / std::sqrt(3.0) * (1 + 1e-9));
  const UnitVector e0 = UnitVector::basis(2, 0), e1 = UnitVector::basis(2, 1);
  const SegrePoint p(PreSegrePoint(s, 1.0, {e0, e0, e0}));
  const SegrePoint q(PreSegrePoint(s, 1.0, {e1, e1, e1}));
  EXPECT_THROW(segre_log(p, q), NotConnectedError);
  const Distance d = segre_distance(p, q);
  EXPECT_FALSE(d.connected);
  EXPECT_DOUBLE_EQ(d.value, 2.0);
}

TEST(SegreLog, RoundTripOnRandomConnectedPairs) {
  Rng rng(22);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const ManifoldShape base_shape = testing::random_shape(rng, 3, 4, 3, 1.0);
    const ManifoldShape s = base_shape.with_alpha(testing::safe_alpha(base_shape));
    if (embedding_size(s) > 10'000) continue;
    const SegrePoint p(testing::random_point(rng, s));
    const SegrePoint q(testing::random_point(rng, s));
    SegreTangent v = zero_tangent(p);
    try {
      v = segre_log(p, q);
    } catch (const AntipodalFactorError&) {
      continue;
    }
    EXPECT_LE(segre_exp(p, v).tensor().max_abs_diff(q.tensor()), 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(SegreTangent, LiftCarriesCoordinatesAcrossTheFiber) {
  Rng rng(23);
  const ManifoldShape s({3, 3}, {1, 2}, 0.5);
  const PreSegrePoint rep = testing::random_point(rng, s);
  const SegrePoint p(rep);
  const SignPattern sigma{{1, -1}};
  const PreSegreTangent v = testing::random_tangent(rng, apply_deck(rep, sigma), 0.3);
  const SegreTangent lifted = SegreTangent::lift(p, v);
  EXPECT_LE(segre_exp(p, lifted).tensor().max_abs_diff(tensor_embed(pre_exp(v.base(), v))), 1e-12);
  EXPECT_THROW(SegreTangent(p, testing::random_tangent(rng, testing::random_point(rng, s), 1.0)),
               ShapeMismatch);
}

TEST(SegreDistance, EqualsFiberMinimum) {
  Rng rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const ManifoldShape s =
        testing::random_shape(rng, 6, 4, 4, testing::uniform(rng, 0.1, 1.5));
    const SegrePoint p(testing::random_point(rng, s));
    const PreSegrePoint q = testing::random_point(rng, s);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& sigma : deck_transforms(s)) {
      best = std::min(best, pre_distance(p.rep(), apply_deck(q, sigma)).value);
    }
    EXPECT_NEAR(segre_distance(p, SegrePoint(q)).value, best, 1e-12);
  }
}

TEST(SegreDistance, NegatedTensorUsesMatching) {
  // T and -T with an odd multiplicity: -T = lambda (-u) (x) w.
  const ManifoldShape s({2, 2}, {1, 1}, 0.5);
  const PreSegrePoint p(s, 1.0, {UnitVector::basis(2, 0), UnitVector::basis(2, 1)});
  const PreSegrePoint neg(s, 1.0, {-UnitVector::basis(2, 0), UnitVector::basis(2, 1)});
  double brute = std::numeric_limits<double>::infinity();
  for (const auto& sigma : deck_transforms(s)) {
    brute = std::min(brute, pre_distance(p, apply_deck(neg, sigma)).value);
  }
  EXPECT_NEAR(segre_distance(SegrePoint(p), SegrePoint(neg)).value, brute, 1e-14);
}

TEST(SegreDistance, RepresentativeIndependence) {
  Rng rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    const ManifoldShape s = testing::random_shape(rng, 5, 4, 3, testing::uniform(rng, 0.1, 1.5));
    const PreSegrePoint p = testing::random_point(rng, s);
    const PreSegrePoint q = testing::random_point(rng, s);
    const double reference = segre_distance(SegrePoint(p), SegrePoint(q)).value;
    const PreSegrePoint p2 = apply_deck(p, testing::random_deck(rng, s));
    EXPECT_NEAR(pre_distance(p2, match_representatives(p2, q)).value, reference, 1e-12);
  }
}

TEST(Connectedness, Examples) {
  EXPECT_EQ(connectedness_class(ManifoldShape({2, 2}, {1, 1}, 0.5)), Connectedness::Connected);
  EXPECT_EQ(connectedness_class(ManifoldShape({2, 2}, {1, 1}, 1.5)), Connectedness::NotConnected);
  EXPECT_EQ(connectedness_class(ManifoldShape({2, 2}, {1, 1}, 1.0)), Connectedness::Unknown);
  EXPECT_STREQ(to_string(Connectedness::Unknown), "unknown");
}

TEST(Connectedness, AutoAlphaIsConnected) {
  const std::vector<int> mults{1, 2, 3};
  const double alpha = auto_alpha(mults);
  EXPECT_LT(alpha, 1.0 / std::sqrt(6.0));
  EXPECT_EQ(connectedness_class(ManifoldShape({2, 2, 2}, mults, alpha)), Connectedness::Connected);
}

TEST(Connectedness, PreSegreThresholdForAntipodalPair) {
  const ManifoldShape base({2, 3}, {1, 2}, 1.0);
  const double threshold = 1.0 / std::sqrt(3.0);
  auto pair_at = [&](double alpha) {
    const ManifoldShape s = base.with_alpha(alpha);
    const PreSegrePoint p(s, 1.0, {UnitVector::basis(2, 0), UnitVector::basis(3, 0)});
    const PreSegrePoint q(s, 1.0, {-UnitVector::basis(2, 0), -UnitVector::basis(3, 0)});
    return is_compatible(p, q);
  };
  EXPECT_TRUE(pair_at(threshold * (1 - 1e-9)));
  EXPECT_FALSE(pair_at(threshold * (1 + 1e-9)));
}

}  // namespace
}  // namespace segre
