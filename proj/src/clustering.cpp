// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "intentd/error.hpp"
#include "intentd/metrics.hpp"
#include "intentd/rng.hpp"

namespace intentd {
namespace {

void check_weights(std::span<const EmbeddingVector> vectors, std::span<const double> weights) {
  if (vectors.size() != weights.size()) fail(ErrorCode::kLengthMismatch, "one weight per vector expected");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) fail(ErrorCode::kInvalidArgument, "weights must be positive and finite");
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

struct LloydRun {
  std::vector<std::size_t> assignments;
  std::vector<std::vector<double>> centroids;
  std::vector<double> history;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

std::vector<std::vector<double>> kmeanspp_seed(std::span<const EmbeddingVector> x, std::span<const double> w,
                                               std::size_t k, Rng& rng) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  std::vector<bool> chosen(n, false);

  auto pick_weighted = [&](const std::vector<double>& mass) -> std::size_t {
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    if (!(total > 0.0)) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) return i;
      }
      return 0;
    }
    double r = rng.uniform_real() * total;
    std::size_t last = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mass[i] <= 0.0) continue;
      last = i;
      if (r < mass[i]) return i;
      r -= mass[i];
    }
    return last;
  };

  std::vector<double> mass(w.begin(), w.end());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t idx = pick_weighted(mass);
    chosen[idx] = true;
    centroids.emplace_back(x[idx].values().begin(), x[idx].values().end());
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(x[i].values(), centroids.back()));
      mass[i] = d2[i] * w[i];
    }
  }
  return centroids;
}

// Returns true when any assignment changed.
bool assign(std::span<const EmbeddingVector> x, std::span<const double> w, LloydRun& run,
            std::vector<double>& point_d2) {
  bool changed = false;
  run.inertia = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < run.centroids.size(); ++c) {
      const double d = squared_distance(x[i].values(), run.centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    if (run.assignments[i] != best) {
      run.assignments[i] = best;
      changed = true;
    }
    point_d2[i] = best_d;
    run.inertia += w[i] * best_d;
  }
  run.history.push_back(run.inertia);
  return changed;
}

// Moves centroids to weighted means; an empty cluster takes the point farthest
// from its current centroid. Returns the largest centroid shift.
double update(std::span<const EmbeddingVector> x, std::span<const double> w, LloydRun& run,
              std::vector<double>& point_d2) {
  const std::size_t k = run.centroids.size();
  const std::size_t dim = x.front().dim();
  std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
  std::vector<double> mass(k, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto& s = sums[run.assignments[i]];
    const auto v = x[i].values();
    for (std::size_t d = 0; d < dim; ++d) s[d] += w[i] * v[d];
    mass[run.assignments[i]] += w[i];
  }
  double shift = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> next(dim);
    if (mass[c] > 0.0) {
      for (std::size_t d = 0; d < dim; ++d) next[d] = sums[c][d] / mass[c];
    } else {
      const auto far = static_cast<std::size_t>(
          std::distance(point_d2.begin(), std::max_element(point_d2.begin(), point_d2.end())));
      if (point_d2[far] <= 0.0) continue;
      next.assign(x[far].values().begin(), x[far].values().end());
      point_d2[far] = 0.0;
    }
    shift = std::max(shift, std::sqrt(squared_distance(next, run.centroids[c])));
    run.centroids[c] = std::move(next);
  }
  return shift;
}

LloydRun lloyd(std::span<const EmbeddingVector> x, std::span<const double> w, const KMeansOptions& opt,
               std::uint64_t seed) {
  Rng rng(seed);
  LloydRun run;
  run.centroids = kmeanspp_seed(x, w, opt.k, rng);
  run.assignments.assign(x.size(), std::numeric_limits<std::size_t>::max());
  std::vector<double> point_d2(x.size(), 0.0);
  assign(x, w, run, point_d2);
  for (std::size_t it = 0; it < opt.max_iters; ++it) {
    const double shift = update(x, w, run, point_d2);
    const bool changed = assign(x, w, run, point_d2);
    run.iterations = it + 1;
    if (!changed || shift < opt.tol) break;
  }
  return run;
}

}  // namespace

std::size_t estimate_k_dbscan_weighted(std::span<const EmbeddingVector> vectors, std::span<const double> weights,
                                       double eps, std::size_t min_pts) {
  if (vectors.empty()) fail(ErrorCode::kEmptyInput, "DBSCAN needs at least one vector");
  if (!(eps > 0.0)) fail(ErrorCode::kInvalidArgument, "DBSCAN eps must be > 0");
  if (min_pts == 0) fail(ErrorCode::kInvalidArgument, "DBSCAN min_pts must be >= 1");
  check_weights(vectors, weights);
  const std::size_t n = vectors.size();

  std::vector<std::vector<std::size_t>> neighbours(n);
  std::vector<double> mass(weights.begin(), weights.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (1.0 - cosine_similarity(vectors[i], vectors[j]) <= eps) {
        neighbours[i].push_back(j);
        neighbours[j].push_back(i);
        mass[i] += weights[j];
        mass[j] += weights[i];
      }
    }
  }
  const double need = static_cast<double>(min_pts) - 1e-9;
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> cluster(n, kUnvisited);
  std::size_t clusters = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cluster[i] != kUnvisited || mass[i] < need) continue;
    // Expand from an unassigned core point; border points join but do not expand.
    std::deque<std::size_t> frontier{i};
    cluster[i] = clusters;
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      if (mass[p] < need) continue;
      for (std::size_t q : neighbours[p]) {
        if (cluster[q] == kUnvisited) {
          cluster[q] = clusters;
          frontier.push_back(q);
        }
      }
    }
    ++clusters;
  }
  return std::max<std::size_t>(clusters, 1);
}

std::size_t estimate_k_dbscan(std::span<const EmbeddingVector> vectors, double eps, std::size_t min_pts) {
  const std::vector<double> ones(vectors.size(), 1.0);
  return estimate_k_dbscan_weighted(vectors, ones, eps, min_pts);
}

KMeansResult kmeans_weighted(std::span<const EmbeddingVector> vectors, std::span<const double> weights,
                             const KMeansOptions& options) {
  if (vectors.empty()) fail(ErrorCode::kEmptyInput, "k-means needs at least one vector");
  if (options.k < 1 || options.k > vectors.size()) {
    fail(ErrorCode::kInvalidK, "k must be in [1, " + std::to_string(vectors.size()) + "], got " +
                                   std::to_string(options.k));
  }
  check_weights(vectors, weights);
  const std::size_t dim = vectors.front().dim();
  for (const auto& v : vectors) {
    if (v.dim() != dim) fail(ErrorCode::kDimensionMismatch, "k-means vectors differ in dimension");
  }

  KMeansResult best;
  bool have = false;
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    LloydRun run = lloyd(vectors, weights, options, derive_seed(options.seed, r));
    best.restart_inertias.push_back(run.inertia);
    if (!have || run.inertia < best.inertia) {
      have = true;
      best.assignments = std::move(run.assignments);
      best.centroids = std::move(run.centroids);
      best.inertia = run.inertia;
      best.iterations = run.iterations;
      best.inertia_history = std::move(run.history);
    }
  }
  return best;
}

KMeansResult kmeans(std::span<const EmbeddingVector> vectors, const KMeansOptions& options) {
  const std::vector<double> ones(vectors.size(), 1.0);
  return kmeans_weighted(vectors, ones, options);
}

}  // namespace intentd
