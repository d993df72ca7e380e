// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "intentd/embeddings.hpp"

namespace intentd {

// ---------------------------------------------------------------------------
// Optimal assignment

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), ascending row
  double total_cost = 0.0;
};

/// Minimum-cost assignment (Hungarian method with potentials, O(n^3)).
/// Rectangular inputs are zero-padded to square; only real (row, col) pairs are
/// returned. Throws NonFinite, InvalidArgument (ragged rows).
Assignment hungarian(const std::vector<std::vector<double>>& cost);

// ---------------------------------------------------------------------------
// Partition agreement

/// Counts of true classes (rows) against clusters (columns). Ids are arbitrary
/// integers; rows/columns follow ascending id order.
struct ContingencyTable {
  std::vector<std::int64_t> class_ids;
  std::vector<std::int64_t> cluster_ids;
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> col_sums;
  std::int64_t total = 0;

  /// Throws LengthMismatch, EmptyInput.
  static ContingencyTable build(std::span<const std::int64_t> gold, std::span<const std::int64_t> clusters);
};

/// Hungarian-matched accuracy in [0, 1].
double clustering_accuracy(std::span<const std::int64_t> gold, std::span<const std::int64_t> clusters);
/// Mutual information over the arithmetic mean of the two entropies (natural log).
double nmi(std::span<const std::int64_t> gold, std::span<const std::int64_t> clusters);
/// Adjusted Rand index (pair counting, adjusted for chance).
double ari(std::span<const std::int64_t> gold, std::span<const std::int64_t> clusters);

double clustering_accuracy(const ContingencyTable& table);
double nmi(const ContingencyTable& table);
double ari(const ContingencyTable& table);

struct NdiResult {
  std::size_t count = 0;
  std::size_t deviation = 0;
};
/// Throws InvalidArgument when gold_intent_count == 0.
NdiResult ndi(std::size_t discovered_db_size, std::size_t gold_intent_count);

// ---------------------------------------------------------------------------
// Clustering

/// Number of DBSCAN clusters under cosine distance (noise excluded), at least 1.
/// A point is core when its eps-neighbourhood (distance <= eps, itself
/// included) holds >= min_pts points.
std::size_t estimate_k_dbscan(std::span<const EmbeddingVector> vectors, double eps = 0.5, std::size_t min_pts = 2);
/// Same with per-point multiplicities (a point of weight w counts as w copies).
std::size_t estimate_k_dbscan_weighted(std::span<const EmbeddingVector> vectors, std::span<const double> weights,
                                       double eps = 0.5, std::size_t min_pts = 2);

struct KMeansOptions {
  std::size_t k = 1;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
  std::size_t max_iters = 300;
  double tol = 1e-6;
};

struct KMeansResult {
  std::vector<std::size_t> assignments;
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;
  std::size_t iterations = 0;
  std::vector<double> inertia_history;   // best restart, one entry per assignment step
  std::vector<double> restart_inertias;  // final inertia of every restart
};

/// k-means++ seeding, Lloyd iterations until the largest centroid shift < tol
/// or max_iters; best of `restarts` by inertia. Throws InvalidK, EmptyInput.
KMeansResult kmeans(std::span<const EmbeddingVector> vectors, const KMeansOptions& options);
/// Weighted variant; weights must be positive.
KMeansResult kmeans_weighted(std::span<const EmbeddingVector> vectors, std::span<const double> weights,
                             const KMeansOptions& options);

// ---------------------------------------------------------------------------
// Frechet distance between Gaussian fits

/// ||mu_a - mu_b||^2 + tr(S_a + S_b - 2 (S_a S_b)^{1/2}) with S = cov + shrinkage*I
/// (unbiased covariance). Throws TooFewSamples, DimensionMismatch,
/// NumericalFailure, InvalidArgument (shrinkage < 0).
double frechet_distance(std::span<const EmbeddingVector> set_a, std::span<const EmbeddingVector> set_b,
                        double shrinkage = 1e-6);

/// Frechet distance of the two text sets' embeddings.
double fbd(std::span<const std::string> set_a, std::span<const std::string> set_b, EmbeddingProvider& provider,
           double shrinkage = 1e-6);

}  // namespace intentd
