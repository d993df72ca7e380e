// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "intentd/domain.hpp"
#include "intentd/error.hpp"
#include "intentd/embeddings.hpp"
#include "intentd/llm.hpp"
#include "intentd/prompt_cache.hpp"
#include "intentd/prompting.hpp"
#include "intentd/sampler.hpp"

namespace intentd {

enum class Provenance { kSeed, kDiscovered };

/// Known-intent database: seed labels first, discovered labels appended in
/// discovery order, unique under normalization.
class IntentDatabase {
 public:
  struct Entry {
    IntentLabel label;
    Provenance provenance;
    std::optional<std::size_t> discovered_at_batch;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  IntentDatabase() = default;
  explicit IntentDatabase(std::span<const IntentLabel> seed);

  /// Throws InvalidArgument once a discovered entry exists.
  void add_seed(const IntentLabel& label);
  /// Appends when absent; returns whether it was new.
  bool add_discovered(const IntentLabel& label, std::size_t batch_index);
  bool contains(const IntentLabel& label) const { return index_.contains(label.value()); }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::vector<IntentLabel> labels() const;
  std::vector<IntentLabel> seed_labels() const;
  std::vector<IntentLabel> discovered_labels() const;
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t seed_count() const noexcept { return seed_count_; }

  friend bool operator==(const IntentDatabase& a, const IntentDatabase& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_set<std::string> index_;
  std::size_t seed_count_ = 0;
};

/// Known-intent feedback: appends every predicted label missing from `db`
/// (once per distinct label) and flags the records that introduced one.
std::vector<IntentLabel> kif_update(IntentDatabase& db, std::vector<PredictionRecord>& predictions,
                                   std::size_t batch_index);

struct RunConfig {
  std::string dataset_id = "dataset";
  double kir = 0.75;
  double pool_fraction = 0.10;
  std::size_t n_shots = 10;
  std::optional<std::size_t> n_skif;
  std::size_t batch_size = 16;
  double temperature = 0.7;
  int max_output_tokens = 1024;
  std::uint64_t seed = 0;
  bool icpg_enabled = true;
  bool sfs_enabled = true;
  bool kif_enabled = true;
  bool dedup_by_text = true;
  SkifRepresentation skif_representation = SkifRepresentation::kLabelText;
  std::size_t x_per_intent = 2;
  std::size_t max_parse_retries = 1;
  std::string model_id = "gpt-4";
  TokenBudget budget{};
  std::filesystem::path output_dir;
  std::filesystem::path cache_dir = ".intentd-cache";
  /// Resolved, secret-free settings of the front end that produced this run
  /// (dataset path, backend choice, endpoints). Round-trips through the
  /// snapshot so a run can be reconstructed.
  std::map<std::string, std::string> settings;

  /// Throws ValidationError / InvalidRatio.
  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct BatchLog {
  std::size_t batch_index = 0;
  std::string prompt_digest;
  std::size_t attempts = 0;
  std::vector<IntentLabel> new_intents;

  friend bool operator==(const BatchLog&, const BatchLog&) = default;
};

struct RunResult {
  std::vector<PredictionRecord> predictions;
  IntentDatabase final_db;
  RunConfig config_snapshot;
  std::vector<BatchLog> per_batch_log;
  std::vector<IntentLabel> known_intents;
  std::vector<IntentLabel> unknown_intents;
  std::size_t total_batches = 0;
  bool complete = false;

  std::size_t completed_batches() const noexcept { return per_batch_log.size(); }
  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Builds the ICPG meta-prompt for the split and resolves the task prompt via
/// the cache (at most one backend call).
GenerationResult prepare_task_prompt(const RunConfig& config, const KirSplit& split, LlmBackend& backend);

/// Error raised from inside the batch loop; keeps the underlying code.
class BatchError : public Error {
 public:
  BatchError(ErrorCode code, std::size_t batch_index, const std::string& message)
      : Error(code, "batch " + std::to_string(batch_index) + ": " + message), batch_index_(batch_index) {}
  std::size_t batch_index() const noexcept { return batch_index_; }

 private:
  std::size_t batch_index_;
};

struct RunHooks {
  /// Persist after every batch (partial manifest) and at the end (complete).
  std::optional<std::filesystem::path> persist_dir;
  /// Continue a partial run: completed batches are skipped.
  const RunResult* resume_from = nullptr;
  /// Stop after this many batches in total (simulated interruption).
  std::optional<std::size_t> stop_after_batches;
  std::function<void(const BatchLog&)> on_batch;
  /// Backend for the one-time prompt generation; defaults to the predictor.
  LlmBackend* generator = nullptr;
};

/// The sequential discovery loop. Deterministic for a fixed seed and
/// deterministic backends. Throws BatchError for failures inside a batch.
RunResult run_discovery(const RunConfig& config, const KirSplit& split, LlmBackend& llm,
                        EmbeddingProvider& embedder, const RunHooks& hooks = {});

// ---------------------------------------------------------------------------
// Run directory

inline constexpr const char* kPredictionsFile = "predictions.jsonl";
inline constexpr const char* kIntentsFile = "intents.jsonl";
inline constexpr const char* kConfigFile = "config.json";
inline constexpr const char* kBatchLogFile = "batches.jsonl";
inline constexpr const char* kSplitFile = "split.json";
inline constexpr const char* kManifestFile = "manifest.json";

struct ManifestEntry {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct Manifest {
  bool complete = false;
  std::size_t completed_batches = 0;
  std::size_t total_batches = 0;
  std::vector<ManifestEntry> files;
};

/// Writes predictions, intents snapshot, config snapshot, batch log, split and
/// a manifest (written last) with per-file digests. Throws IoError.
Manifest persist_run(const RunResult& result, const std::filesystem::path& dir);
/// Reads a run directory back. Throws IoError, ParseError.
RunResult load_run(const std::filesystem::path& dir);
Manifest load_manifest(const std::filesystem::path& dir);

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

}  // namespace intentd
