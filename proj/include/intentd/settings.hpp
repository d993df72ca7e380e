// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "intentd/domain.hpp"
#include "intentd/embeddings.hpp"
#include "intentd/engine.hpp"
#include "intentd/evaluation.hpp"
#include "intentd/llm.hpp"

namespace intentd {

/// Resolved front-end configuration: "section.key" -> value. Explicitly set
/// values win over file values, which win over defaults, regardless of the
/// order in which they are applied. Secrets never live here; the API token is
/// read from the environment variable named by `llm.token_env`.
class Settings {
 public:
  Settings();

  /// Every recognised key with its default, in file order.
  static const std::vector<std::pair<std::string, std::string>>& defaults();

  /// Reads a sectioned INI file. Throws IoError, ParseError, ValidationError
  /// (unrecognised key).
  void load_file(const std::filesystem::path& path);
  /// Explicit override. Throws ValidationError for an unrecognised key.
  void set(const std::string& key, const std::string& value);
  /// Throws NotFound for an unrecognised key.
  const std::string& get(const std::string& key) const;
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  /// Typed, validated engine configuration. Throws ValidationError.
  RunConfig run_config() const;
  /// Rebuilds settings from a config snapshot (its `settings` map).
  static Settings from_snapshot(const RunConfig& snapshot);
  /// Reads a config.json snapshot. Throws IoError, ParseError.
  static Settings from_snapshot_file(const std::filesystem::path& path);

 private:
  void assign(const std::string& key, const std::string& value, bool explicit_value);

  std::map<std::string, std::string> values_;
  std::set<std::string> explicit_;
};

/// Loads the dataset and builds the seeded split described by `settings`.
KirSplit load_split(const Settings& settings);

/// Backend named by `llm.backend`. Oracles answer from the split's test set.
std::shared_ptr<LlmBackend> make_backend(const Settings& settings, const KirSplit& split);
/// Embedding provider named by `embedding.provider`.
std::shared_ptr<EmbeddingProvider> make_embedder(const Settings& settings);

struct GenPromptOutcome {
  std::filesystem::path path;
  bool cache_hit = false;
};
/// Generates (or reads back) the task prompt for the configured split.
/// With `use_fallback` the fixed human-written prompt is stored instead.
GenPromptOutcome gen_prompt(const Settings& settings, bool use_fallback);

struct RunOutcome {
  std::filesystem::path dir;
  RunResult result;
};
/// Executes and persists a run into `engine.output_dir`, or continues the
/// partial run in `resume_dir` using its snapshot. A batch failure after
/// persistence surfaces as PartialRun carrying the underlying message.
RunOutcome run_command(const Settings& settings, const std::optional<std::filesystem::path>& resume_dir = {});

/// Evaluates a persisted run and writes report.json and contingency.csv into
/// it. Missing artifacts are listed per file (IoError).
ClusterEvalReport eval_command(const std::filesystem::path& run_dir, const EvalOptions& options);

}  // namespace intentd
