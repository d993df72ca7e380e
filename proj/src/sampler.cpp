// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentd/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

#include "intentd/error.hpp"

namespace intentd {
namespace {

std::vector<EmbeddingVector> embed_batch_texts(std::span<const Utterance> batch, EmbeddingProvider& provider) {
  std::vector<std::string> texts;
  texts.reserve(batch.size());
  for (const auto& u : batch) texts.push_back(u.text);
  return embed_texts(provider, texts);
}

double max_similarity(const EmbeddingVector& item, std::span<const EmbeddingVector> batch) {
  double best = -1.0;
  for (const auto& q : batch) best = std::max(best, cosine_similarity(item, q));
  return best;
}

struct Scored {
  std::size_t index;
  double score;
};

void sort_scored(std::vector<Scored>& s) {
  std::stable_sort(s.begin(), s.end(), [](const Scored& a, const Scored& b) {
    return a.score != b.score ? a.score > b.score : a.index < b.index;
  });
}

}  // namespace

FewShotPool FewShotPool::build(std::vector<LabeledExample> examples, EmbeddingProvider& provider) {
  FewShotPool pool;
  if (!examples.empty()) {
    std::vector<std::string> texts;
    texts.reserve(examples.size());
    for (const auto& e : examples) texts.push_back(e.text);
    pool.embeddings_ = embed_texts(provider, texts);
  }
  pool.examples_ = std::move(examples);
  return pool;
}

std::vector<LabeledExample> select_few_shots(std::span<const Utterance> batch, const FewShotPool& pool,
                                             std::size_t n_shots, EmbeddingProvider& provider, bool dedup_by_text) {
  if (n_shots == 0) return {};
  if (pool.empty()) fail(ErrorCode::kEmptyPool, "few-shot sampling requested from an empty pool");
  if (batch.empty()) fail(ErrorCode::kEmptyInput, "few-shot sampling needs a non-empty batch");
  const auto queries = embed_batch_texts(batch, provider);
  std::vector<Scored> scored;
  scored.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) scored.push_back({i, max_similarity(pool.embeddings()[i], queries)});
  sort_scored(scored);

  std::vector<LabeledExample> out;
  std::unordered_set<std::string_view> seen;
  for (const auto& s : scored) {
    if (out.size() == n_shots) break;
    const auto& ex = pool.examples()[s.index];
    if (dedup_by_text && !seen.insert(ex.text).second) continue;
    out.push_back(ex);
  }
  return out;
}

std::vector<LabeledExample> select_random_few_shots(const FewShotPool& pool, std::size_t n_shots, Rng& rng,
                                                    bool dedup_by_text) {
  if (n_shots == 0) return {};
  if (pool.empty()) fail(ErrorCode::kEmptyPool, "few-shot sampling requested from an empty pool");
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<LabeledExample> out;
  std::unordered_set<std::string_view> seen;
  for (std::size_t i : order) {
    if (out.size() == n_shots) break;
    const auto& ex = pool.examples()[i];
    if (dedup_by_text && !seen.insert(ex.text).second) continue;
    out.push_back(ex);
  }
  return out;
}

std::vector<IntentLabel> select_intents_skif(std::span<const Utterance> batch, std::span<const IntentLabel> labels,
                                             std::optional<std::size_t> n_skif, EmbeddingProvider& provider,
                                             SkifRepresentation representation, const FewShotPool* pool) {
  std::vector<IntentLabel> all(labels.begin(), labels.end());
  if (!n_skif || *n_skif >= labels.size()) return all;
  if (*n_skif == 0) fail(ErrorCode::kInvalidArgument, "n_skif must be >= 1");
  if (batch.empty()) fail(ErrorCode::kEmptyInput, "SKIF needs a non-empty batch");
  const auto queries = embed_batch_texts(batch, provider);

  std::vector<std::string> label_texts;
  label_texts.reserve(labels.size());
  for (const auto& l : labels) label_texts.push_back(l.as_text());
  const auto label_vecs = embed_texts(provider, label_texts);

  // Centroid representation: mean of the label's pool embeddings where any exist.
  std::map<IntentLabel, std::vector<double>> centroids;
  if (representation == SkifRepresentation::kPoolCentroid && pool != nullptr && !pool->empty()) {
    std::map<IntentLabel, std::size_t> counts;
    for (std::size_t i = 0; i < pool->size(); ++i) {
      const auto& label = pool->examples()[i].intent;
      auto& acc = centroids[label];
      const auto v = pool->embeddings()[i].values();
      if (acc.empty()) acc.assign(v.size(), 0.0);
      for (std::size_t d = 0; d < v.size(); ++d) acc[d] += v[d];
      ++counts[label];
    }
    for (auto& [label, acc] : centroids) {
      for (double& x : acc) x /= static_cast<double>(counts[label]);
    }
  }

  std::vector<Scored> scored;
  scored.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double score;
    auto c = centroids.find(labels[i]);
    if (c != centroids.end() && std::any_of(c->second.begin(), c->second.end(), [](double x) { return x != 0.0; })) {
      score = max_similarity(EmbeddingVector(c->second), queries);
    } else {
      score = max_similarity(label_vecs[i], queries);
    }
    scored.push_back({i, score});
  }
  sort_scored(scored);
  scored.resize(*n_skif);
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) { return a.index < b.index; });
  std::vector<IntentLabel> out;
  out.reserve(scored.size());
  for (const auto& s : scored) out.push_back(labels[s.index]);
  return out;
}

}  // namespace intentd
