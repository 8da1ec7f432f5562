#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "segre/aggregate.hpp"
#include "segre/hungarian.hpp"
#include "test_support.hpp"

namespace segre {
namespace {

using testing::Rng;

double assignment_cost(const std::vector<std::vector<double>>& c, const std::vector<std::size_t>& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) s += c[r][a[r]];
  return s;
}

TEST(Hungarian, MatchesExhaustiveSearch) {
  Rng rng(60);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testing::uniform_int(rng, 1, 6);
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (auto& row : cost) {
      for (double& c : row) c = testing::uniform(rng, -1.0, 5.0);
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
      best = std::min(best, assignment_cost(cost, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto a = hungarian(cost);
    std::vector<std::size_t> sorted = a;
    std::sort(sorted.begin(), sorted.end());
    for (int j = 0; j < n; ++j) EXPECT_EQ(sorted[j], static_cast<std::size_t>(j));
    EXPECT_NEAR(assignment_cost(cost, a), best, 1e-12);
  }
}

TEST(Hungarian, EdgeCases) {
  EXPECT_TRUE(hungarian({}).empty());
  EXPECT_THROW(hungarian({{1.0, 2.0}}), ShapeMismatch);
}

TEST(NormalizeTerm, FoldsNormsAndSign) {
  const ManifoldShape s({2, 2}, {2, 1}, 0.5);
  RawTerm t{-1.5, {(Vector(2) << 0.0, 2.0).finished(), (Vector(2) << 3.0, 4.0).finished()}};
  const SegrePoint p = normalize_term(s, t);
  EXPECT_DOUBLE_EQ(p.lambda(), 1.5 * 4.0 * 5.0);
  // Same tensor as the raw outer product.
  const DenseTensor raw = detail::outer(t.lambda, {&t.factors[0], &t.factors[0], &t.factors[1]});
  EXPECT_LE(p.tensor().max_abs_diff(raw), 1e-12);
}

TEST(NormalizeTerm, RejectsUnrepresentableInput) {
  const ManifoldShape even({2}, {2}, 1.0);
  EXPECT_THROW(normalize_term(even, RawTerm{-1.0, {Vector::Unit(2, 0)}}), ShapeMismatch);
  EXPECT_THROW(normalize_term(even, RawTerm{0.0, {Vector::Unit(2, 0)}}), ShapeMismatch);
  EXPECT_THROW(normalize_term(even, RawTerm{1.0, {Vector::Zero(2)}}), ShapeMismatch);
  EXPECT_THROW(normalize_term(even, RawTerm{1.0, {Vector::Unit(3, 0)}}), ShapeMismatch);
}

struct Synthetic {
  Decomposition truth;
  std::vector<Decomposition> decomps;
};

Synthetic make_synthetic(Rng& rng, const ManifoldShape& s, int rank, int m, double sigma) {
  Synthetic out;
  for (int r = 0; r < rank; ++r) out.truth.emplace_back(testing::random_point(rng, s, 1.0, 3.0));
  for (int j = 0; j < m; ++j) {
    Decomposition d;
    for (const auto& t : out.truth) {
      std::vector<UnitVector> factors;
      for (std::size_t i = 0; i < s.order(); ++i) {
        factors.push_back(
            UnitVector::normalize(t.rep().factor(i).coords() + sigma * testing::gaussian(rng, s.dim(i))));
      }
      const PreSegrePoint noisy(s, t.lambda(), std::move(factors));
      d.emplace_back(apply_deck(noisy, testing::random_deck(rng, s)));
    }
    std::shuffle(d.begin(), d.end(), rng);
    out.decomps.push_back(std::move(d));
  }
  return out;
}

TEST(Aggregate, SingleDecompositionIsReturnedUnchanged) {
  Rng rng(61);
  const ManifoldShape s0({3, 3}, {1, 1}, 1.0);
  const ManifoldShape s = s0.with_alpha(testing::safe_alpha(s0));
  const Synthetic syn = make_synthetic(rng, s, 3, 1, 0.05);
  const AggregateResult r = aggregate(syn.decomps);
  ASSERT_EQ(r.terms.size(), 3u);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(approx_equal(r.terms[j], syn.decomps[0][j], 1e-14));
}

TEST(Aggregate, IdenticalDecompositionsGiveTheCommonTerms) {
  Rng rng(62);
  const ManifoldShape s0({4, 3}, {1, 2}, 1.0);
  const ManifoldShape s = s0.with_alpha(testing::safe_alpha(s0));
  const Synthetic syn = make_synthetic(rng, s, 2, 1, 0.0);
  std::vector<Decomposition> copies(20, syn.decomps[0]);
  std::reverse(copies[3].begin(), copies[3].end());
  const AggregateResult r = aggregate(copies);
  for (std::size_t j = 0; j < r.terms.size(); ++j) {
    EXPECT_LE(r.terms[j].tensor().max_abs_diff(syn.decomps[0][j].tensor()), 1e-8);
    EXPECT_LE(r.spreads[j], 1e-8);
  }
  EXPECT_EQ(r.assignments[3][0], 1u);
}

TEST(Aggregate, InvariantUnderPermutingLaterDecompositions) {
  Rng rng(63);
  const ManifoldShape s0({5, 5, 5}, {1, 1, 1}, 1.0);
  const ManifoldShape s = s0.with_alpha(testing::safe_alpha(s0));
  Synthetic syn = make_synthetic(rng, s, 3, 8, 0.05);
  const AggregateResult a = aggregate(syn.decomps);
  std::shuffle(syn.decomps.begin() + 1, syn.decomps.end(), rng);
  const AggregateResult b = aggregate(syn.decomps);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_LE(a.terms[j].tensor().max_abs_diff(b.terms[j].tensor()), 1e-7);
  }
}

TEST(Aggregate, BeatsTypicalSingleDecomposition) {
  Rng rng(64);
  const ManifoldShape s0({6, 6, 6}, {1, 1, 1}, 1.0);
  const ManifoldShape s = s0.with_alpha(testing::safe_alpha(s0));
  const Synthetic syn = make_synthetic(rng, s, 3, 12, 0.05);
  const AggregateResult r = aggregate(syn.decomps);
  const double agg_err = relative_frobenius_error(sum_tensor(r.terms), sum_tensor(syn.truth));
  std::vector<double> single;
  for (const auto& d : syn.decomps) {
    single.push_back(relative_frobenius_error(sum_tensor(d), sum_tensor(syn.truth)));
  }
  std::sort(single.begin(), single.end());
  EXPECT_LT(agg_err, single[single.size() / 2]);
}

TEST(Aggregate, RankMismatchRejected) {
  Rng rng(65);
  const ManifoldShape s({3, 3}, {1, 1}, 0.5);
  Decomposition a{SegrePoint(testing::random_point(rng, s)), SegrePoint(testing::random_point(rng, s))};
  Decomposition b{SegrePoint(testing::random_point(rng, s))};
  EXPECT_THROW(aggregate({a, b}), ShapeMismatch);
}

}  // namespace
}  // namespace segre
