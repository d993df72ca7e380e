// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "intentd/http.hpp"

namespace intentd {

class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  /// Throws NonFinite on NaN/inf entries, EmptyInput on zero length.
  explicit EmbeddingVector(std::vector<double> values, bool unit_normalized = false);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  bool unit_normalized() const noexcept { return unit_; }
  double norm() const;

  friend bool operator==(const EmbeddingVector& a, const EmbeddingVector& b) { return a.values_ == b.values_; }

 private:
  std::vector<double> values_;
  bool unit_ = false;
};

/// Text embedder. Implementations must be deterministic per instance, return
/// vectors in input order and be safe to call concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual bool normalizes() const = 0;

 protected:
  friend std::vector<EmbeddingVector> embed_texts(EmbeddingProvider&, std::span<const std::string>);
  virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) = 0;
};

/// Validates input (non-empty list of non-empty texts) and output shape.
/// Throws EmptyInput, EmptyText, ProviderError.
std::vector<EmbeddingVector> embed_texts(EmbeddingProvider& provider, std::span<const std::string> texts);
EmbeddingVector embed_text(EmbeddingProvider& provider, const std::string& text);

/// Throws DimensionMismatch, ZeroVector. Result clamped to [-1, 1].
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

struct Neighbor {
  std::size_t index;
  double similarity;
};

/// Exact top-k by descending cosine similarity, ties by ascending index.
/// Throws EmptyPool, InvalidArgument (k == 0).
std::vector<Neighbor> knn(const EmbeddingVector& query, std::span<const EmbeddingVector> pool, std::size_t k);

/// Character-trigram counts over the lowercased text padded with one space on
/// each side, hashed (FNV-1a 64) into `dim` buckets and L2-normalized.
/// Throws EmptyText, InvalidArgument (dim < 8).
EmbeddingVector hashed_trigram_embed(std::string_view text, std::size_t dim);

class TrigramEmbedder final : public EmbeddingProvider {
 public:
  explicit TrigramEmbedder(std::size_t dim = 512);
  std::string name() const override { return "trigram-" + std::to_string(dim_); }
  std::size_t dim() const override { return dim_; }
  bool normalizes() const override { return true; }

 protected:
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override;

 private:
  std::size_t dim_;
};

/// OpenAI-compatible `POST {base}/embeddings` client:
/// request {"model", "input": [...]}, response {"data": [{"index", "embedding"}]}.
class RemoteEmbedder final : public EmbeddingProvider {
 public:
  RemoteEmbedder(HttpEndpoint endpoint, std::string model, RetryPolicy retry = {},
                 std::shared_ptr<HttpTransport> transport = nullptr);
  std::string name() const override { return "remote:" + model_; }
  std::size_t dim() const override;
  bool normalizes() const override { return false; }

 protected:
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override;

 private:
  HttpEndpoint endpoint_;
  std::string model_;
  RetryPolicy retry_;
  std::shared_ptr<HttpTransport> transport_;
  mutable std::mutex mu_;
  mutable std::size_t dim_ = 0;
};

/// Memoizes another provider by text. Thread-safe.
class CachingEmbedder final : public EmbeddingProvider {
 public:
  explicit CachingEmbedder(std::shared_ptr<EmbeddingProvider> inner) : inner_(std::move(inner)) {}
  std::string name() const override { return inner_->name(); }
  std::size_t dim() const override { return inner_->dim(); }
  bool normalizes() const override { return inner_->normalizes(); }
  std::size_t cached() const;

 protected:
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override;

 private:
  std::shared_ptr<EmbeddingProvider> inner_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, EmbeddingVector> cache_;
};

}  // namespace intentd
