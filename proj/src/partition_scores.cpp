// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>

#include "intentd/error.hpp"
#include "intentd/metrics.hpp"

namespace intentd {
namespace {

double entropy(const std::vector<std::int64_t>& sums, double total) {
  double h = 0.0;
  for (auto s : sums) {
    if (s > 0) {
      const double p = static_cast<double>(s) / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

double pairs(std::int64_t n) { return static_cast<double>(n) * static_cast<double>(n - 1) / 2.0; }

}  // namespace

ContingencyTable ContingencyTable::build(std::span<const std::int64_t> gold, std::span<const std::int64_t> clusters) {
  if (gold.size() != clusters.size()) {
    fail(ErrorCode::kLengthMismatch, "labelings differ in length: " + std::to_string(gold.size()) + " vs " +
                                         std::to_string(clusters.size()));
  }
  if (gold.empty()) fail(ErrorCode::kEmptyInput, "labelings are empty");
  std::map<std::int64_t, std::size_t> rows, cols;
  for (auto g : gold) rows.emplace(g, 0);
  for (auto c : clusters) cols.emplace(c, 0);
  ContingencyTable t;
  for (auto& [id, idx] : rows) {
    idx = t.class_ids.size();
    t.class_ids.push_back(id);
  }
  for (auto& [id, idx] : cols) {
    idx = t.cluster_ids.size();
    t.cluster_ids.push_back(id);
  }
  t.counts.assign(rows.size(), std::vector<std::int64_t>(cols.size(), 0));
  t.row_sums.assign(rows.size(), 0);
  t.col_sums.assign(cols.size(), 0);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto r = rows[gold[i]];
    const auto c = cols[clusters[i]];
    ++t.counts[r][c];
    ++t.row_sums[r];
    ++t.col_sums[c];
  }
  t.total = static_cast<std::int64_t>(gold.size());
  return t;
}

double clustering_accuracy(const ContingencyTable& t) {
  std::vector<std::vector<double>> cost(t.counts.size(), std::vector<double>(t.cluster_ids.size()));
  for (std::size_t i = 0; i < t.counts.size(); ++i) {
    for (std::size_t j = 0; j < t.cluster_ids.size(); ++j) cost[i][j] = -static_cast<double>(t.counts[i][j]);
  }
  const Assignment a = hungarian(cost);
  std::int64_t matched = 0;
  for (auto [r, c] : a.pairs) matched += t.counts[r][c];
  return static_cast<double>(matched) / static_cast<double>(t.total);
}

double nmi(const ContingencyTable& t) {
  const double n = static_cast<double>(t.total);
  const double hu = entropy(t.row_sums, n);
  const double hv = entropy(t.col_sums, n);
  // Both partitions a single block: identical.
  if (hu == 0.0 && hv == 0.0) return 1.0;
  if (hu == 0.0 || hv == 0.0) return 0.0;
  double mi = 0.0;
  for (std::size_t i = 0; i < t.counts.size(); ++i) {
    for (std::size_t j = 0; j < t.col_sums.size(); ++j) {
      const auto nij = t.counts[i][j];
      if (nij == 0) continue;
      const double x = static_cast<double>(nij);
      mi += x / n * std::log(n * x / (static_cast<double>(t.row_sums[i]) * static_cast<double>(t.col_sums[j])));
    }
  }
  return std::clamp(mi / ((hu + hv) / 2.0), 0.0, 1.0);
}

double ari(const ContingencyTable& t) {
  double index = 0.0;
  for (const auto& row : t.counts) {
    for (auto nij : row) index += pairs(nij);
  }
  double a = 0.0, b = 0.0;
  for (auto s : t.row_sums) a += pairs(s);
  for (auto s : t.col_sums) b += pairs(s);
  const double all = pairs(t.total);
  if (all == 0.0) return 1.0;
  const double expected = a * b / all;
  const double max_index = (a + b) / 2.0;
  // Degenerate when both partitions are all-singletons or one block each.
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

double clustering_accuracy(std::span<const std::int64_t> gold, std::span<const std::int64_t> clusters) {
  return clustering_accuracy(ContingencyTable::build(gold, clusters));
}

double nmi(std::span<const std::int64_t> gold, std::span<const std::int64_t> clusters) {
  return nmi(ContingencyTable::build(gold, clusters));
}

double ari(std::span<const std::int64_t> gold, std::span<const std::int64_t> clusters) {
  return ari(ContingencyTable::build(gold, clusters));
}

NdiResult ndi(std::size_t db_size, std::size_t gold_intent_count) {
  if (gold_intent_count == 0) fail(ErrorCode::kInvalidArgument, "gold intent count must be >= 1");
  return {db_size, db_size > gold_intent_count ? db_size - gold_intent_count : gold_intent_count - db_size};
}

}  // namespace intentd
