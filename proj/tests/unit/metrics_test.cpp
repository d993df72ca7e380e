// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "intentd/metrics.hpp"
#include "intentd/rng.hpp"
#include "support/brute_force.hpp"
#include "support/error_code.hpp"
#include "support/synthetic.hpp"

namespace intentd {
namespace {

using testing::code_of;
using Labels = std::vector<std::int64_t>;

EmbeddingVector vec(std::vector<double> v) { return EmbeddingVector(std::move(v)); }

Labels random_labels(Rng& rng, std::size_t n, std::size_t k) {
  Labels out(n);
  for (auto& x : out) x = static_cast<std::int64_t>(rng.uniform_index(k));
  return out;
}

// -- Hungarian ---------------------------------------------------------------

TEST(Hungarian, SmallExamples) {
  const auto a = hungarian({{4, 1, 3}, {2, 0, 5}, {3, 2, 2}});
  EXPECT_DOUBLE_EQ(a.total_cost, 5.0);
  EXPECT_EQ(a.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 0}, {2, 2}}));
  EXPECT_DOUBLE_EQ(hungarian({{7}}).total_cost, 7.0);
  EXPECT_TRUE(hungarian({}).pairs.empty());
  // Rectangular: 2 rows, 3 columns.
  const auto r = hungarian({{5, 1, 9}, {1, 8, 9}});
  EXPECT_DOUBLE_EQ(r.total_cost, 2.0);
  EXPECT_EQ(r.pairs.size(), 2u);
  // Tall: 3 rows, 1 column; only one real pair.
  const auto t = hungarian({{3}, {1}, {2}});
  ASSERT_EQ(t.pairs.size(), 1u);
  EXPECT_EQ(t.pairs[0], std::make_pair(std::size_t{1}, std::size_t{0}));
  EXPECT_DOUBLE_EQ(t.total_cost, 1.0);
}

TEST(Hungarian, Errors) {
  EXPECT_EQ(code_of([] { hungarian({{1, 2}, {3}}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { hungarian({{1, std::numeric_limits<double>::quiet_NaN()}}); }), ErrorCode::kNonFinite);
  EXPECT_EQ(code_of([] { hungarian({{std::numeric_limits<double>::infinity()}}); }), ErrorCode::kNonFinite);
}

TEST(Hungarian, MatchesExhaustiveSearch) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng.uniform_index(7), cols = 1 + rng.uniform_index(7);
    std::vector<std::vector<double>> cost(rows, std::vector<double>(cols));
    // Integer costs make every summation order exact.
    for (auto& row : cost)
      for (auto& c : row) c = static_cast<double>(rng.uniform_index(100)) - 30.0;
    const auto a = hungarian(cost);
    EXPECT_EQ(a.total_cost, testing::brute_assignment_cost(cost)) << trial;
    double from_pairs = 0;
    std::set<std::size_t> used_rows, used_cols;
    for (auto [r, c] : a.pairs) {
      from_pairs += cost[r][c];
      EXPECT_TRUE(used_rows.insert(r).second);
      EXPECT_TRUE(used_cols.insert(c).second);
    }
    EXPECT_EQ(from_pairs, a.total_cost);
    EXPECT_EQ(a.pairs.size(), std::min(rows, cols));
  }
}

// -- partition scores --------------------------------------------------------

TEST(PartitionScores, AriWorkedExample) {
  const Labels gold = {0, 0, 1, 1}, pred = {0, 0, 1, 2};
  EXPECT_NEAR(ari(gold, pred), 4.0 / 7.0, 1e-12);
  EXPECT_NEAR(testing::brute_ari(gold, pred), 4.0 / 7.0, 1e-12);
}

TEST(PartitionScores, Examples) {
  const Labels a = {0, 0, 1, 1, 2, 2};
  const Labels relabeled = {5, 5, 9, 9, 7, 7};
  EXPECT_DOUBLE_EQ(clustering_accuracy(a, relabeled), 1.0);
  EXPECT_NEAR(nmi(a, relabeled), 1.0, 1e-12);
  EXPECT_NEAR(ari(a, relabeled), 1.0, 1e-12);
  EXPECT_NEAR(clustering_accuracy(Labels{0, 0, 1, 1}, Labels{0, 1, 1, 1}), 0.75, 1e-12);
  // One cluster against two balanced classes carries no information.
  EXPECT_NEAR(nmi(Labels{0, 0, 1, 1}, Labels{3, 3, 3, 3}), 0.0, 1e-12);
  EXPECT_NEAR(nmi(Labels{0, 1, 0, 1}, Labels{0, 0, 1, 1}), 0.0, 1e-12);
  EXPECT_EQ(code_of([] { nmi(Labels{0, 1}, Labels{0}); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(code_of([] { ari(Labels{}, Labels{}); }), ErrorCode::kEmptyInput);
}

TEST(PartitionScores, ContingencyTable) {
  const auto t = ContingencyTable::build(Labels{2, 2, 7, 7, 7}, Labels{1, 0, 0, 0, 4});
  EXPECT_EQ(t.class_ids, (Labels{2, 7}));
  EXPECT_EQ(t.cluster_ids, (Labels{0, 1, 4}));
  EXPECT_EQ(t.counts, (std::vector<Labels>{{1, 1, 0}, {2, 0, 1}}));
  EXPECT_EQ(t.row_sums, (Labels{2, 3}));
  EXPECT_EQ(t.col_sums, (Labels{3, 1, 1}));
  EXPECT_EQ(t.total, 5);
}

TEST(PartitionScores, MatchBruteForceOracles) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(12);
    const Labels gold = random_labels(rng, n, 1 + rng.uniform_index(5));
    const Labels pred = random_labels(rng, n, 1 + rng.uniform_index(5));
    EXPECT_NEAR(ari(gold, pred), testing::brute_ari(gold, pred), 1e-9) << trial;
    EXPECT_NEAR(nmi(gold, pred), testing::brute_nmi(gold, pred), 1e-9) << trial;
    EXPECT_NEAR(clustering_accuracy(gold, pred), testing::brute_acc(gold, pred), 1e-9) << trial;
  }
}

TEST(PartitionScores, BoundsAndSymmetryProperty) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(60);
    const Labels a = random_labels(rng, n, 1 + rng.uniform_index(8));
    const Labels b = random_labels(rng, n, 1 + rng.uniform_index(8));
    const double v = nmi(a, b);
    EXPECT_GE(v, -1e-12);
    EXPECT_LE(v, 1 + 1e-12);
    EXPECT_NEAR(v, nmi(b, a), 1e-12);
    EXPECT_NEAR(ari(a, b), ari(b, a), 1e-12);
    EXPECT_LE(ari(a, b), 1 + 1e-12);
    const double acc = clustering_accuracy(a, b);
    EXPECT_GE(acc, 0.0);
    EXPECT_LE(acc, 1.0);
  }
}

TEST(Ndi, Examples) {
  EXPECT_EQ(ndi(150, 150).deviation, 0u);
  EXPECT_EQ(ndi(241, 150).deviation, 91u);
  EXPECT_EQ(ndi(100, 150).deviation, 50u);
  EXPECT_EQ(ndi(100, 150).count, 100u);
  EXPECT_EQ(code_of([] { ndi(3, 0); }), ErrorCode::kInvalidArgument);
}

// -- DBSCAN ------------------------------------------------------------------

TEST(Dbscan, Examples) {
  const std::vector<EmbeddingVector> two = {vec({1, 0}), vec({0.99, 0.1}), vec({0, 1}), vec({0.1, 0.99})};
  EXPECT_EQ(estimate_k_dbscan(two), 2u);
  // All noise still reports one cluster.
  const std::vector<EmbeddingVector> lonely = {vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})};
  EXPECT_EQ(estimate_k_dbscan(lonely), 1u);
  // Weight 2 makes a lone point its own core.
  const std::vector<double> w = {2, 1, 2};
  EXPECT_EQ(estimate_k_dbscan_weighted(lonely, w), 2u);
  EXPECT_EQ(code_of([&] { estimate_k_dbscan(std::vector<EmbeddingVector>{}); }), ErrorCode::kEmptyInput);
}

TEST(Dbscan, RecoversBlobCount) {
  for (std::size_t k = 3; k <= 20; ++k) {
    const auto blobs = testing::make_blobs(k, 8, 24, 0.1, k);
    // Precondition: blobs are tight and far apart in cosine distance.
    for (std::size_t i = 0; i < blobs.points.size(); ++i) {
      for (std::size_t j = i + 1; j < blobs.points.size(); ++j) {
        const double d = 1.0 - cosine_similarity(blobs.points[i], blobs.points[j]);
        if (blobs.labels[i] == blobs.labels[j]) {
          ASSERT_LT(d, 0.5);
        } else {
          ASSERT_GT(d, 0.5);
        }
      }
    }
    EXPECT_EQ(estimate_k_dbscan(blobs.points, 0.5), k);
  }
}

// -- k-means -----------------------------------------------------------------

TEST(KMeans, OneDimensionalInstance) {
  const std::vector<EmbeddingVector> pts = {vec({0}), vec({0.1}), vec({10}), vec({10.1})};
  const auto r = kmeans(pts, {.k = 2, .seed = 1});
  EXPECT_EQ(r.assignments[0], r.assignments[1]);
  EXPECT_EQ(r.assignments[2], r.assignments[3]);
  EXPECT_NE(r.assignments[0], r.assignments[2]);
  EXPECT_NEAR(r.inertia, 0.01, 1e-12);  // 4 * 0.05^2

  // Exhaustive check over all 2-partitions confirms the minimum.
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < 15; ++mask) {
    double sum[2] = {0, 0}, sq[2] = {0, 0};
    int cnt[2] = {0, 0};
    for (int i = 0; i < 4; ++i) {
      const int g = (mask >> i) & 1;
      const double x = pts[i].values()[0];
      sum[g] += x;
      sq[g] += x * x;
      ++cnt[g];
    }
    double inertia = 0;
    for (int g = 0; g < 2; ++g) inertia += sq[g] - sum[g] * sum[g] / cnt[g];
    best = std::min(best, inertia);
  }
  EXPECT_NEAR(r.inertia, best, 1e-12);
}

TEST(KMeans, SeparableBlobsAndMonotoneInertia) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::size_t k = 3 + seed;
    const auto blobs = testing::make_blobs(k, 12, 16, 0.1, seed + 40);
    const auto r = kmeans(blobs.points, {.k = k, .seed = seed});
    Labels got(r.assignments.begin(), r.assignments.end());
    EXPECT_NEAR(ari(blobs.labels, got), 1.0, 1e-12);
    ASSERT_FALSE(r.inertia_history.empty());
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i) {
      EXPECT_LE(r.inertia_history[i], r.inertia_history[i - 1] + 1e-9);
    }
    EXPECT_EQ(r.restart_inertias.size(), 10u);
    EXPECT_DOUBLE_EQ(r.inertia, *std::min_element(r.restart_inertias.begin(), r.restart_inertias.end()));
  }
}

TEST(KMeans, DeterministicAndWeighted) {
  const auto blobs = testing::make_blobs(4, 6, 8, 0.2, 5);
  const auto a = kmeans(blobs.points, {.k = 4, .seed = 9});
  const auto b = kmeans(blobs.points, {.k = 4, .seed = 9});
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_EQ(a.inertia, b.inertia);
  // A weight of 3 behaves like three copies of the point.
  const std::vector<EmbeddingVector> pts = {vec({0}), vec({1}), vec({10})};
  const std::vector<double> w = {3, 1, 1};
  const auto r = kmeans_weighted(pts, w, {.k = 2, .seed = 0});
  EXPECT_NEAR(r.inertia, 3 * 0.25 * 0.25 + 0.75 * 0.75, 1e-12);
  EXPECT_EQ(code_of([&] { kmeans(pts, {.k = 0}); }), ErrorCode::kInvalidK);
  EXPECT_EQ(code_of([&] { kmeans(pts, {.k = 4}); }), ErrorCode::kInvalidK);
  EXPECT_EQ(code_of([&] { kmeans(std::vector<EmbeddingVector>{}, {.k = 1}); }), ErrorCode::kEmptyInput);
}

// -- Frechet distance --------------------------------------------------------

TEST(Frechet, IdentityAndSymmetry) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<EmbeddingVector> a, b;
    for (int i = 0; i < 6; ++i) {
      std::vector<double> x(4), y(4);
      for (auto& v : x) v = rng.uniform_real() * 2 - 1;
      for (auto& v : y) v = rng.uniform_real() * 3;
      a.push_back(vec(x));
      b.push_back(vec(y));
    }
    EXPECT_NEAR(frechet_distance(a, a), 0.0, 1e-9);
    EXPECT_NEAR(frechet_distance(a, b), frechet_distance(b, a), 1e-9);
    EXPECT_GE(frechet_distance(a, b), -1e-9);
  }
}

TEST(Frechet, OneDimensionalClosedForm) {
  // Means 1 and 2, equal variance: distance = (mu_a - mu_b)^2 = 1.
  const std::vector<EmbeddingVector> a = {vec({0}), vec({2})}, b = {vec({1}), vec({3})};
  EXPECT_NEAR(frechet_distance(a, b), 1.0, 1e-6);
  // Equal means, variances 2 and 8: distance = (sqrt 2 - sqrt 8)^2 = 2.
  const std::vector<EmbeddingVector> c = {vec({-1}), vec({1})}, d = {vec({-2}), vec({2})};
  EXPECT_NEAR(frechet_distance(c, d, 0.0), 2.0, 1e-9);
}

TEST(Frechet, Errors) {
  const std::vector<EmbeddingVector> one = {vec({1, 2})}, two = {vec({1, 2}), vec({3, 4})}, other = {vec({1}), vec({2})};
  EXPECT_EQ(code_of([&] { frechet_distance(one, two); }), ErrorCode::kTooFewSamples);
  EXPECT_EQ(code_of([&] { frechet_distance(two, other); }), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of([&] { frechet_distance(two, two, -1.0); }), ErrorCode::kInvalidArgument);
}

TEST(Frechet, TextSets) {
  TrigramEmbedder e;
  const std::vector<std::string> a = {"a", "b", "c"}, b = {"d", "e", "f"};
  EXPECT_NEAR(fbd(a, a, e), 0.0, 1e-9);
  EXPECT_NEAR(fbd(a, b, e), fbd(b, a, e), 1e-9);
  EXPECT_GT(fbd(a, b, e), 0.0);
}

}  // namespace
}  // namespace intentd
