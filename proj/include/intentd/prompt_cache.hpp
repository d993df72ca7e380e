// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "intentd/llm.hpp"
#include "intentd/prompting.hpp"

namespace intentd {

struct PromptKey {
  std::string dataset_id;
  std::size_t n_known = 0;
  std::size_t x_per_intent = 0;
  std::string model_id;

  /// Hex SHA-256 of the four fields; doubles as the cache file name.
  std::string digest() const;
};

/// One text file per key (file name = hex digest, content = raw prompt).
/// Concurrent misses on one key coalesce into a single producer call.
class PromptCache {
 public:
  explicit PromptCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path path_for(const std::string& key) const { return dir_ / key; }
  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& text);

  struct Lookup {
    std::string text;
    bool hit = false;
  };
  /// Returns the cached text, or runs `produce` once (even under concurrent
  /// callers), stores and returns its result.
  Lookup get_or_produce(const std::string& key, const std::function<std::string()>& produce);

 private:
  std::filesystem::path dir_;
  std::mutex mu_;
  std::map<std::string, std::shared_future<std::string>> inflight_;
};

struct GenerationSettings {
  double temperature = 0.7;
  int max_output_tokens = 1024;
};

struct GenerationResult {
  GeneratedPrompt prompt;
  bool cache_hit = false;
  std::filesystem::path path;
};

/// One-time task-prompt generation: on a cache hit returns the stored prompt
/// without touching the backend; on a miss makes exactly one backend call,
/// validates and persists the result. Throws BackendError, EmptyGeneration,
/// ForbiddenLabel (generated text assigns "unknown").
GenerationResult generate_task_prompt(LlmBackend& backend, const std::string& icpg_prompt, PromptCache& cache,
                                      const PromptKey& key, const GenerationSettings& settings = {});

}  // namespace intentd
