// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intentd/domain.hpp"
#include "intentd/embeddings.hpp"
#include "intentd/engine.hpp"
#include "intentd/metrics.hpp"

namespace intentd {

struct EvalOptions {
  /// Replaces the DBSCAN estimate of K.
  std::optional<std::size_t> k_override;
  double eps = 0.5;
  std::size_t min_pts = 2;
  /// Seed for k-means; the run seed is used when absent.
  std::optional<std::uint64_t> kmeans_seed;
  std::size_t kmeans_restarts = 10;
  std::size_t kmeans_max_iters = 300;
  bool compute_fbd = false;
  double fbd_shrinkage = 1e-6;
};

struct ClusterEvalReport {
  double nmi = 0.0;
  double ari = 0.0;
  double acc = 0.0;
  std::size_t ndi = 0;
  std::size_t ndi_deviation = 0;
  std::size_t gold_intent_count = 0;
  /// K from the override or the DBSCAN estimate.
  std::size_t k_requested = 0;
  /// K handed to k-means: k_requested capped at the number of distinct labels.
  std::size_t k_used = 0;
  std::size_t n_items = 0;
  std::size_t distinct_predicted = 0;
  std::optional<double> fbd;
  ContingencyTable table;
  /// Row and column names of `table` (gold labels, cluster ids).
  std::vector<std::string> class_names;
};

/// Clusters the embeddings of the predicted label texts (one point per
/// distinct label, weighted by its frequency) and scores the clusters against
/// `gold`, one label per prediction. NDI uses the final database against the
/// union of known and unknown intents of the split.
ClusterEvalReport evaluate_run(const RunResult& result, std::span<const IntentLabel> gold,
                               EmbeddingProvider& provider, const EvalOptions& options = {});
/// Gold labels taken from the predictions. Throws ValidationError when one is missing.
ClusterEvalReport evaluate_run(const RunResult& result, EmbeddingProvider& provider, const EvalOptions& options = {});

inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kContingencyFile = "contingency.csv";

/// Writes the flat report (metric name to value) and the contingency table.
/// Returns the report path. Throws IoError.
std::filesystem::path write_report(const ClusterEvalReport& report, const std::filesystem::path& dir);
/// Reads a flat report back. Throws IoError, ParseError.
std::map<std::string, double> load_report(const std::filesystem::path& path);

enum class TableFormat { kText, kCsv };

/// Rows are runs, columns NMI/ARI/ACC/NDI/FBD. Absent metrics render as "-"
/// in text and as empty cells in CSV.
std::string tabulate_reports(std::span<const std::filesystem::path> report_paths, TableFormat format);

}  // namespace intentd
