#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "segre/errors.hpp"

namespace segre {

// Minimum-cost perfect matching on a square cost matrix (row-major, n x n),
// by the O(n^3) shortest-augmenting-path form of the Hungarian method.
// Returns assignment[row] = column.
inline std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  for (const auto& row : cost) {
    if (row.size() != n) throw ShapeMismatch("assignment cost matrix must be square");
    for (double c : row) {
      if (!std::isfinite(c)) throw ShapeMismatch("assignment costs must be finite");
    }
  }
  if (n == 0) return {};

  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is a virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match_col(n + 1, 0), way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    match_col[0] = row;
    std::size_t col0 = 0;
    std::vector<double> min_v(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const std::size_t r = match_col[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double reduced = cost[r - 1][col - 1] - u[r] - v[col];
        if (reduced < min_v[col]) {
          min_v[col] = reduced;
          way[col] = col0;
        }
        if (min_v[col] < delta) {
          delta = min_v[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match_col[col]] += delta;
          v[col] -= delta;
        } else {
          min_v[col] -= delta;
        }
      }
      col0 = col1;
    } while (match_col[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match_col[col0] = match_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<std::size_t> assignment(n);
  for (std::size_t col = 1; col <= n; ++col) assignment[match_col[col] - 1] = col - 1;
  return assignment;
}

}  // namespace segre
