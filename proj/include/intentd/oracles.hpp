// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "intentd/domain.hpp"
#include "intentd/llm.hpp"

namespace intentd {

/// utterance text -> gold intent. Keys are whitespace-collapsed like the
/// prompt's test block.
using AnswerKey = std::unordered_map<std::string, IntentLabel>;
AnswerKey make_answer_key(std::span<const LabeledExample> examples);

/// Reply oracle backends give to requests without a test block (prompt
/// generation).
std::string_view oracle_task_prompt();

/// Answers every numbered test utterance with its gold intent.
class GoldOracleBackend : public LlmBackend {
 public:
  explicit GoldOracleBackend(AnswerKey key) : key_(std::move(key)) {}
  std::string name() const override { return "gold-oracle"; }

 protected:
  CompletionResponse do_complete(const CompletionRequest& request) override;
  /// Label to emit for a gold intent. Identity here.
  virtual const IntentLabel& emit(const IntentLabel& gold) const { return gold; }

 private:
  AnswerKey key_;
};

/// Gold oracle that consistently renames labels through `paraphrase`.
/// Throws InvalidArgument when the map is not injective.
class ParaphraseOracleBackend final : public GoldOracleBackend {
 public:
  ParaphraseOracleBackend(AnswerKey key, std::map<IntentLabel, IntentLabel> paraphrase);
  std::string name() const override { return "paraphrase-oracle"; }

 protected:
  const IntentLabel& emit(const IntentLabel& gold) const override;

 private:
  std::map<IntentLabel, IntentLabel> paraphrase_;
};

/// Loads a paraphrase map from a JSON object {"gold_label": "alternate", ...}.
std::map<IntentLabel, IntentLabel> load_paraphrase_map(const std::filesystem::path& path);

/// Mock of an undisciplined model: it reuses a name for an utterance's intent
/// only when that name is listed in the prompt (or was already used earlier in
/// the same reply); otherwise it invents a fresh variant ("<gold>_v<n>").
class DriftMockBackend final : public LlmBackend {
 public:
  explicit DriftMockBackend(AnswerKey key) : key_(std::move(key)) {}
  std::string name() const override { return "drift-mock"; }

 protected:
  CompletionResponse do_complete(const CompletionRequest& request) override;

 private:
  AnswerKey key_;
  std::mutex mu_;
  std::map<IntentLabel, std::vector<std::string>> emitted_;
};

enum class CassetteMode { kRecord, kReplay };

/// Record mode forwards to `inner` and appends one JSONL line
/// {"digest", "model", "response"} per completion. Replay mode serves stored
/// responses by request digest and throws CassetteMiss for unseen requests.
class ReplayBackend final : public LlmBackend {
 public:
  ReplayBackend(std::filesystem::path cassette, CassetteMode mode, std::shared_ptr<LlmBackend> inner = nullptr);
  std::string name() const override;
  std::size_t entries() const;

 protected:
  CompletionResponse do_complete(const CompletionRequest& request) override;

 private:
  std::filesystem::path path_;
  CassetteMode mode_;
  std::shared_ptr<LlmBackend> inner_;
  mutable std::mutex mu_;
  std::map<std::string, std::vector<std::string>> stored_;
  std::map<std::string, std::size_t> served_;
  std::size_t count_ = 0;
};

}  // namespace intentd
