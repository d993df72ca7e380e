// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "intentd/digest.hpp"
#include "intentd/error.hpp"
#include "intentd/rng.hpp"

namespace intentd {

// -- IntentDatabase ----------------------------------------------------------

IntentDatabase::IntentDatabase(std::span<const IntentLabel> seed) {
  for (const auto& l : seed) add_seed(l);
}

void IntentDatabase::add_seed(const IntentLabel& label) {
  if (seed_count_ != entries_.size()) fail(ErrorCode::kInvalidArgument, "seed intents must precede discovered ones");
  if (!index_.insert(label.value()).second) return;
  entries_.push_back({label, Provenance::kSeed, std::nullopt});
  ++seed_count_;
}

bool IntentDatabase::add_discovered(const IntentLabel& label, std::size_t batch_index) {
  if (!index_.insert(label.value()).second) return false;
  entries_.push_back({label, Provenance::kDiscovered, batch_index});
  return true;
}

std::vector<IntentLabel> IntentDatabase::labels() const {
  std::vector<IntentLabel> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.label);
  return out;
}

std::vector<IntentLabel> IntentDatabase::seed_labels() const {
  std::vector<IntentLabel> out;
  for (const auto& e : entries_) {
    if (e.provenance == Provenance::kSeed) out.push_back(e.label);
  }
  return out;
}

std::vector<IntentLabel> IntentDatabase::discovered_labels() const {
  std::vector<IntentLabel> out;
  for (const auto& e : entries_) {
    if (e.provenance == Provenance::kDiscovered) out.push_back(e.label);
  }
  return out;
}

std::vector<IntentLabel> kif_update(IntentDatabase& db, std::vector<PredictionRecord>& predictions,
                                    std::size_t batch_index) {
  std::vector<IntentLabel> added;
  for (auto& p : predictions) {
    p.newly_discovered = db.add_discovered(p.intent, batch_index);
    if (p.newly_discovered) added.push_back(p.intent);
  }
  return added;
}

// -- RunConfig ---------------------------------------------------------------

void RunConfig::validate() const {
  if (!(kir > 0.0 && kir <= 1.0)) fail(ErrorCode::kInvalidRatio, "kir must be in (0, 1]");
  if (!(pool_fraction > 0.0 && pool_fraction <= 1.0)) fail(ErrorCode::kInvalidRatio, "pool fraction must be in (0, 1]");
  if (batch_size < 1) fail(ErrorCode::kValidationError, "batch size must be >= 1");
  if (n_skif && *n_skif < 1) fail(ErrorCode::kValidationError, "n_skif must be >= 1 when set");
  if (!(temperature >= 0.0 && temperature <= 2.0)) fail(ErrorCode::kValidationError, "temperature must be within [0, 2]");
  if (max_output_tokens <= 0) fail(ErrorCode::kValidationError, "max output tokens must be positive");
  if (x_per_intent < 1) fail(ErrorCode::kValidationError, "examples per intent must be >= 1");
  if (budget.max_tokens < 1) fail(ErrorCode::kValidationError, "token budget must be positive");
  if (model_id.empty()) fail(ErrorCode::kValidationError, "model id must be set");
}

// -- Discovery loop ----------------------------------------------------------

GenerationResult prepare_task_prompt(const RunConfig& config, const KirSplit& split, LlmBackend& backend) {
  const std::string meta = build_icpg_prompt(split.known_intents, split.few_shot_pool_source, config.x_per_intent,
                                             config.seed);
  PromptCache cache(config.cache_dir);
  const PromptKey key{config.dataset_id, split.known_intents.size(), config.x_per_intent, config.model_id};
  return generate_task_prompt(backend, meta, cache, key, {config.temperature, config.max_output_tokens});
}

namespace {

bool is_parse_failure(ErrorCode code) {
  return code == ErrorCode::kUnparseable || code == ErrorCode::kCountMismatch || code == ErrorCode::kForbiddenLabel;
}

}  // namespace

RunResult run_discovery(const RunConfig& config, const KirSplit& split, LlmBackend& llm, EmbeddingProvider& embedder,
                        const RunHooks& hooks) {
  config.validate();
  if (split.known_intents.empty()) {
    fail(ErrorCode::kValidationError, "the split has no known intents; raise the known intent ratio");
  }

  CachingEmbedder embed(std::shared_ptr<EmbeddingProvider>(&embedder, [](EmbeddingProvider*) {}));
  const std::vector<Utterance> test = to_utterances(split.test);
  const std::size_t total_batches = (test.size() + config.batch_size - 1) / config.batch_size;

  RunResult result;
  result.config_snapshot = config;
  result.known_intents = split.known_intents;
  result.unknown_intents = split.unknown_intents;
  result.total_batches = total_batches;
  result.final_db = IntentDatabase(split.known_intents);

  std::size_t start = 0;
  if (hooks.resume_from != nullptr) {
    const RunResult& prev = *hooks.resume_from;
    RunConfig a = prev.config_snapshot, b = config;
    a.output_dir.clear();
    b.output_dir.clear();
    if (!(a == b)) fail(ErrorCode::kValidationError, "resume: configuration differs from the interrupted run");
    if (prev.known_intents != split.known_intents || prev.total_batches != total_batches) {
      fail(ErrorCode::kValidationError, "resume: split differs from the interrupted run");
    }
    result.predictions = prev.predictions;
    result.final_db = prev.final_db;
    result.per_batch_log = prev.per_batch_log;
    start = prev.completed_batches();
  }

  auto persist = [&] {
    if (hooks.persist_dir) persist_run(result, *hooks.persist_dir);
  };

  std::string task_prompt(fallback_task_prompt());
  if (config.icpg_enabled) {
    task_prompt = prepare_task_prompt(config, split, hooks.generator ? *hooks.generator : llm).prompt.text;
  }

  const FewShotPool pool = (config.n_shots > 0 || config.skif_representation == SkifRepresentation::kPoolCentroid)
                               ? FewShotPool::build(split.few_shot_pool_source, embed)
                               : FewShotPool{};
  const std::vector<IntentLabel> seed_labels = split.known_intents;

  persist();
  for (std::size_t b = start; b < total_batches; ++b) {
    if (hooks.stop_after_batches && b >= *hooks.stop_after_batches) {
      persist();
      return result;
    }
    const std::size_t lo = b * config.batch_size;
    const std::size_t hi = std::min(test.size(), lo + config.batch_size);
    const std::span<const Utterance> batch(test.data() + lo, hi - lo);

    try {
      std::vector<LabeledExample> shots;
      if (config.n_shots > 0) {
        if (config.sfs_enabled) {
          shots = select_few_shots(batch, pool, config.n_shots, embed, config.dedup_by_text);
        } else {
          Rng rng(derive_seed(config.seed, 1000 + b));
          shots = select_random_few_shots(pool, config.n_shots, rng, config.dedup_by_text);
        }
      }
      const std::vector<IntentLabel> candidates = config.kif_enabled ? result.final_db.labels() : seed_labels;
      const std::vector<IntentLabel> intents = select_intents_skif(batch, candidates, config.n_skif, embed,
                                                                   config.skif_representation, &pool);
      const PromptBundle bundle = build_inference_prompt(task_prompt, shots, intents, batch, config.budget);

      CompletionRequest req;
      req.user_text = bundle.render();
      req.temperature = config.temperature;
      req.max_output_tokens = config.max_output_tokens;
      req.model_id = config.model_id;
      const std::string digest = sha256_hex(req.user_text);

      std::vector<PredictionRecord> records;
      std::size_t attempts = 0;
      for (;;) {
        ++attempts;
        const CompletionResponse res = complete(llm, req);
        try {
          records = parse_response(res.text, batch, b);
          break;
        } catch (const Error& e) {
          if (!is_parse_failure(e.code()) || attempts > config.max_parse_retries) throw;
          if (attempts == 1) req.user_text += format_reminder(batch.size());
        }
      }

      BatchLog log{b, digest, attempts, kif_update(result.final_db, records, b)};
      result.predictions.insert(result.predictions.end(), records.begin(), records.end());
      result.per_batch_log.push_back(log);
      if (hooks.on_batch) hooks.on_batch(log);
    } catch (const Error& e) {
      throw BatchError(e.code(), b, e.what());
    }
    if (b + 1 < total_batches) persist();
  }
  result.complete = true;
  persist();
  return result;
}

}  // namespace intentd
