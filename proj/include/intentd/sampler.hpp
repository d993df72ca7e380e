// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "intentd/domain.hpp"
#include "intentd/embeddings.hpp"
#include "intentd/rng.hpp"

namespace intentd {

/// Labeled pool with embeddings computed once at construction.
class FewShotPool {
 public:
  FewShotPool() = default;
  /// Embeds every example text (utterance only) with `provider`.
  static FewShotPool build(std::vector<LabeledExample> examples, EmbeddingProvider& provider);

  std::span<const LabeledExample> examples() const noexcept { return examples_; }
  std::span<const EmbeddingVector> embeddings() const noexcept { return embeddings_; }
  std::size_t size() const noexcept { return examples_.size(); }
  bool empty() const noexcept { return examples_.empty(); }

 private:
  std::vector<LabeledExample> examples_;
  std::vector<EmbeddingVector> embeddings_;
};

enum class SkifRepresentation { kLabelText, kPoolCentroid };

struct SamplerConfig {
  std::size_t n_shots = 10;
  std::optional<std::size_t> n_skif;  // absent: every intent passes through
  bool dedup_by_text = true;
  SkifRepresentation skif_representation = SkifRepresentation::kLabelText;
};

/// Semantic few-shot sampling: each pool item scores its max cosine similarity
/// to any batch utterance; top `n_shots` by descending score, ties by pool index.
std::vector<LabeledExample> select_few_shots(std::span<const Utterance> batch, const FewShotPool& pool,
                                             std::size_t n_shots, EmbeddingProvider& provider,
                                             bool dedup_by_text = true);

/// Uniform sample of `n_shots` pool items without replacement (SFS disabled).
std::vector<LabeledExample> select_random_few_shots(const FewShotPool& pool, std::size_t n_shots, Rng& rng,
                                                    bool dedup_by_text = true);

/// Semantic known-intent-feedback sampling. Returns `labels` unchanged when
/// `n_skif` is absent or >= |labels|; otherwise the `n_skif` labels most similar
/// (max over the batch) kept in their original order. `pool` is only consulted
/// for the centroid representation.
std::vector<IntentLabel> select_intents_skif(std::span<const Utterance> batch, std::span<const IntentLabel> labels,
                                             std::optional<std::size_t> n_skif, EmbeddingProvider& provider,
                                             SkifRepresentation representation = SkifRepresentation::kLabelText,
                                             const FewShotPool* pool = nullptr);

}  // namespace intentd
