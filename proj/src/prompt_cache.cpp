// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentd/prompt_cache.hpp"

#include <fstream>
#include <sstream>

#include "intentd/digest.hpp"
#include "intentd/error.hpp"

namespace intentd {

namespace fs = std::filesystem;

std::string PromptKey::digest() const {
  return sha256_hex(dataset_id + '\n' + std::to_string(n_known) + '\n' + std::to_string(x_per_intent) + '\n' +
                    model_id);
}

PromptCache::PromptCache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot create prompt cache " + dir_.string() + ": " + ec.message());
}

std::optional<std::string> PromptCache::get(const std::string& key) const {
  std::ifstream in(path_for(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void PromptCache::put(const std::string& key, const std::string& text) {
  // Write-then-rename so readers never observe a half-written prompt.
  const fs::path tmp = path_for(key + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << text;
    if (!out) fail(ErrorCode::kIoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path_for(key), ec);
  if (ec) fail(ErrorCode::kIoError, "cannot store prompt " + key + ": " + ec.message());
}

PromptCache::Lookup PromptCache::get_or_produce(const std::string& key, const std::function<std::string()>& produce) {
  std::promise<std::string> promise;
  std::shared_future<std::string> future;
  {
    std::lock_guard lock(mu_);
    if (auto stored = get(key)) return {std::move(*stored), true};
    if (auto it = inflight_.find(key); it != inflight_.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      inflight_.emplace(key, future);
      future = {};  // marks this caller as the producer
    }
  }
  if (future.valid()) return {future.get(), true};

  try {
    std::string text = produce();
    put(key, text);
    promise.set_value(text);
    std::lock_guard lock(mu_);
    inflight_.erase(key);
    return {std::move(text), false};
  } catch (...) {
    promise.set_exception(std::current_exception());
    std::lock_guard lock(mu_);
    inflight_.erase(key);
    throw;
  }
}

GenerationResult generate_task_prompt(LlmBackend& backend, const std::string& icpg_prompt, PromptCache& cache,
                                      const PromptKey& key, const GenerationSettings& settings) {
  const std::string digest = key.digest();
  auto lookup = cache.get_or_produce(digest, [&] {
    CompletionRequest req;
    req.user_text = icpg_prompt;
    req.temperature = settings.temperature;
    req.max_output_tokens = settings.max_output_tokens;
    req.model_id = key.model_id;
    CompletionResponse res = complete(backend, req);
    std::string text(trim(res.text));
    if (text.empty()) fail(ErrorCode::kEmptyGeneration, "prompt generator returned empty text");
    if (assigns_unknown_label(text)) {
      fail(ErrorCode::kForbiddenLabel, "generated prompt assigns the \"unknown\" intent");
    }
    return text;
  });
  GenerationResult out;
  out.prompt = GeneratedPrompt{std::move(lookup.text), key.model_id, key.n_known, key.x_per_intent, digest};
  out.cache_hit = lookup.hit;
  out.path = cache.path_for(digest);
  return out;
}

}  // namespace intentd
