#pragma once

// Consensus of several rank-r decompositions of the same tensor: match every
// decomposition's terms to a reference decomposition, then replace each
// matched group of rank-1 terms by its Frechet mean.

#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "segre/covering.hpp"
#include "segre/frechet.hpp"
#include "segre/hungarian.hpp"
#include "segre/segre.hpp"

namespace segre {

using Decomposition = std::vector<SegrePoint>;

// A term as it appears in files: arbitrary scale and nonzero factor vectors.
struct RawTerm {
  double lambda = 1.0;
  std::vector<Vector> factors;
};

// Folds the factor norms into lambda and, when lambda comes out negative,
// flips the first odd-multiplicity factor.
inline SegrePoint normalize_term(const ManifoldShape& shape, const RawTerm& term) {
  if (term.factors.size() != shape.order()) {
    throw ShapeMismatch("term has " + std::to_string(term.factors.size()) + " factors, expected " +
                        std::to_string(shape.order()));
  }
  double lambda = term.lambda;
  std::vector<UnitVector> factors;
  factors.reserve(shape.order());
  for (std::size_t i = 0; i < shape.order(); ++i) {
    if (term.factors[i].size() != shape.dim(i)) {
      throw ShapeMismatch("factor " + std::to_string(i) + " has dimension " +
                          std::to_string(term.factors[i].size()) + ", expected " +
                          std::to_string(shape.dim(i)));
    }
    factors.push_back(UnitVector::normalize(term.factors[i]));
    lambda *= std::pow(term.factors[i].norm(), shape.mult(i));
  }
  if (!std::isfinite(lambda) || lambda == 0.0) {
    throw ShapeMismatch("term has zero or non-finite scale");
  }
  if (lambda < 0.0) {
    std::size_t odd = shape.order();
    for (std::size_t i = 0; i < shape.order() && odd == shape.order(); ++i) {
      if (shape.mult(i) % 2 == 1) odd = i;
    }
    if (odd == shape.order()) {
      throw ShapeMismatch("negative scale with all multiplicities even is not representable");
    }
    factors[odd] = -factors[odd];
    lambda = -lambda;
  }
  return SegrePoint(PreSegrePoint(shape, lambda, std::move(factors)));
}

inline std::vector<std::vector<double>> distance_matrix(const Decomposition& rows,
                                                        const Decomposition& cols) {
  std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      cost[a][b] = segre_distance(rows[a], cols[b]).value;
    }
  }
  return cost;
}

// matched[r] is the term of `other` paired with reference term r.
inline std::vector<std::size_t> match_terms(const Decomposition& reference,
                                            const Decomposition& other) {
  if (reference.size() != other.size()) {
    throw ShapeMismatch("decompositions have different ranks (" +
                        std::to_string(reference.size()) + " vs " + std::to_string(other.size()) +
                        ")");
  }
  return hungarian(distance_matrix(reference, other));
}

inline DenseTensor sum_tensor(const Decomposition& terms, std::size_t cap = kDefaultEmbedCap) {
  if (terms.empty()) throw ShapeMismatch("empty decomposition");
  DenseTensor total = terms.front().tensor(cap);
  for (std::size_t r = 1; r < terms.size(); ++r) total += terms[r].tensor(cap);
  return total;
}

inline double relative_frobenius_error(const DenseTensor& estimate, const DenseTensor& truth) {
  DenseTensor diff = estimate;
  DenseTensor neg = truth;
  neg *= -1.0;
  diff += neg;
  const double denom = truth.frobenius_norm();
  if (!(denom > 0.0)) throw ShapeMismatch("reference tensor is zero");
  return diff.frobenius_norm() / denom;
}

struct AggregateResult {
  Decomposition terms;
  // Per term: root-mean-square distance from the group members to the mean.
  std::vector<double> spreads;
  // assignments[m][r]: index of the term of decomposition m in group r.
  std::vector<std::vector<std::size_t>> assignments;
};

inline AggregateResult aggregate(const std::vector<Decomposition>& decomps,
                                 const MeanConfig& cfg = {}) {
  if (decomps.empty()) throw ShapeMismatch("no decompositions to aggregate");
  const Decomposition& reference = decomps.front();
  const std::size_t rank = reference.size();
  if (rank == 0) throw ShapeMismatch("empty decomposition");
  for (const auto& d : decomps) {
    for (const auto& t : d) require_same_shape(reference.front().rep(), t.rep());
  }

  AggregateResult result;
  result.assignments.reserve(decomps.size());
  for (const auto& d : decomps) result.assignments.push_back(match_terms(reference, d));

  std::vector<std::vector<SegrePoint>> groups(rank);
  for (std::size_t m = 0; m < decomps.size(); ++m) {
    for (std::size_t r = 0; r < rank; ++r) {
      groups[r].push_back(decomps[m][result.assignments[m][r]]);
    }
  }

  std::vector<std::future<SegrePoint>> pending;
  pending.reserve(rank);
  for (std::size_t r = 0; r < rank; ++r) {
    pending.push_back(std::async(std::launch::async, [&group = groups[r], &cfg] {
      return frechet_mean(group, cfg);
    }));
  }
  for (std::size_t r = 0; r < rank; ++r) {
    result.terms.push_back(pending[r].get());
    double sq = 0.0;
    for (const auto& x : groups[r]) {
      const double d = segre_distance(result.terms.back(), x).value;
      sq += d * d;
    }
    result.spreads.push_back(std::sqrt(sq / static_cast<double>(groups[r].size())));
  }
  return result;
}

}  // namespace segre
