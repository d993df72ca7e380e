// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "intentd/error.hpp"
#include "intentd/metrics.hpp"

namespace intentd {

Assignment hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t rows = cost.size();
  if (rows == 0) return {};
  const std::size_t cols = cost.front().size();
  for (const auto& r : cost) {
    if (r.size() != cols) fail(ErrorCode::kInvalidArgument, "hungarian: ragged cost matrix");
    for (double v : r) {
      if (!std::isfinite(v)) fail(ErrorCode::kNonFinite, "hungarian: non-finite cost");
    }
  }
  if (cols == 0) return {};

  const std::size_t n = std::max(rows, cols);
  auto at = [&](std::size_t i, std::size_t j) { return i < rows && j < cols ? cost[i][j] : 0.0; };

  // Potentials u (rows), v (cols); p[j] = row matched to column j; 1-based with
  // column 0 as the augmenting-path root.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  Assignment out;
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_to_col[i] < cols) {
      out.pairs.emplace_back(i, row_to_col[i]);
      out.total_cost += cost[i][row_to_col[i]];
    }
  }
  return out;
}

}  // namespace intentd
