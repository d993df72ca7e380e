// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentd/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <unordered_set>

#include "intentd/error.hpp"

namespace intentd {

using nlohmann::json;

EmbeddingVector::EmbeddingVector(std::vector<double> values, bool unit_normalized)
    : values_(std::move(values)), unit_(unit_normalized) {
  if (values_.empty()) fail(ErrorCode::kEmptyInput, "embedding vector has zero length");
  for (double v : values_) {
    if (!std::isfinite(v)) fail(ErrorCode::kNonFinite, "embedding vector has a non-finite entry");
  }
}

double EmbeddingVector::norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

std::vector<EmbeddingVector> embed_texts(EmbeddingProvider& provider, std::span<const std::string> texts) {
  if (texts.empty()) fail(ErrorCode::kEmptyInput, "embed_texts: no texts");
  for (const auto& t : texts) {
    if (t.empty()) fail(ErrorCode::kEmptyText, "embed_texts: empty text");
  }
  auto out = provider.embed_batch(texts);
  if (out.size() != texts.size()) {
    fail(ErrorCode::kProviderError, provider.name() + ": returned " + std::to_string(out.size()) +
                                        " vectors for " + std::to_string(texts.size()) + " texts");
  }
  const std::size_t dim = out.front().dim();
  for (const auto& v : out) {
    if (v.dim() != dim) fail(ErrorCode::kProviderError, provider.name() + ": inconsistent vector dimensions");
  }
  return out;
}

EmbeddingVector embed_text(EmbeddingProvider& provider, const std::string& text) {
  return std::move(embed_texts(provider, std::span<const std::string>(&text, 1)).front());
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    fail(ErrorCode::kDimensionMismatch,
         "cosine_similarity: dims " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) fail(ErrorCode::kZeroVector, "cosine_similarity: zero vector");
  // sqrt(na) * sqrt(nb) keeps the product order-independent, so sim(a,b) == sim(b,a) bitwise.
  const double s = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(s, -1.0, 1.0);
}

std::vector<Neighbor> knn(const EmbeddingVector& query, std::span<const EmbeddingVector> pool, std::size_t k) {
  if (pool.empty()) fail(ErrorCode::kEmptyPool, "knn: empty pool");
  if (k == 0) fail(ErrorCode::kInvalidArgument, "knn: k must be >= 1");
  std::vector<Neighbor> scored;
  scored.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) scored.push_back({i, cosine_similarity(query, pool[i])});
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                    [](const Neighbor& x, const Neighbor& y) {
                      return x.similarity != y.similarity ? x.similarity > y.similarity : x.index < y.index;
                    });
  scored.resize(take);
  return scored;
}

EmbeddingVector hashed_trigram_embed(std::string_view text, std::size_t dim) {
  if (dim < 8) fail(ErrorCode::kInvalidArgument, "trigram embedder needs dim >= 8");
  if (text.empty()) fail(ErrorCode::kEmptyText, "trigram embedder: empty text");
  std::string padded = " ";
  for (unsigned char c : text) padded.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
  padded.push_back(' ');
  std::vector<double> counts(dim, 0.0);
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t j = i; j < i + 3; ++j) {
      h ^= static_cast<unsigned char>(padded[j]);
      h *= 0x100000001b3ULL;
    }
    counts[h % dim] += 1.0;
  }
  double n = 0.0;
  for (double c : counts) n += c * c;
  n = std::sqrt(n);
  for (double& c : counts) c /= n;
  return EmbeddingVector(std::move(counts), true);
}

TrigramEmbedder::TrigramEmbedder(std::size_t dim) : dim_(dim) {
  if (dim < 8) fail(ErrorCode::kInvalidArgument, "trigram embedder needs dim >= 8");
}

std::vector<EmbeddingVector> TrigramEmbedder::embed_batch(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(hashed_trigram_embed(t, dim_));
  return out;
}

RemoteEmbedder::RemoteEmbedder(HttpEndpoint endpoint, std::string model, RetryPolicy retry,
                               std::shared_ptr<HttpTransport> transport)
    : endpoint_(std::move(endpoint)),
      model_(std::move(model)),
      retry_(std::move(retry)),
      transport_(transport ? std::move(transport) : make_default_transport()) {}

std::size_t RemoteEmbedder::dim() const {
  std::lock_guard lock(mu_);
  return dim_;
}

std::vector<EmbeddingVector> RemoteEmbedder::embed_batch(std::span<const std::string> texts) {
  const json request = {{"model", model_}, {"input", std::vector<std::string>(texts.begin(), texts.end())}};
  HttpCallResult call;
  try {
    call = post_with_retry(*transport_, endpoint_, "/embeddings", request.dump(), retry_);
  } catch (const Error& e) {
    fail(ErrorCode::kProviderError, "embedding endpoint " + endpoint_.base_url + ": " + e.what());
  }
  std::vector<EmbeddingVector> out(texts.size());
  std::vector<bool> seen(texts.size(), false);
  try {
    const json body = json::parse(call.response.body);
    const json& data = body.at("data");
    if (data.size() != texts.size()) fail(ErrorCode::kProviderError, "embedding response has wrong item count");
    for (std::size_t i = 0; i < data.size(); ++i) {
      const std::size_t idx = data[i].contains("index") ? data[i]["index"].get<std::size_t>() : i;
      if (idx >= texts.size() || seen[idx]) fail(ErrorCode::kProviderError, "embedding response has bad index");
      seen[idx] = true;
      out[idx] = EmbeddingVector(data[i].at("embedding").get<std::vector<double>>());
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kProviderError, std::string("malformed embedding response: ") + e.what());
  }
  std::lock_guard lock(mu_);
  if (dim_ == 0) dim_ = out.front().dim();
  if (out.front().dim() != dim_) fail(ErrorCode::kProviderError, "embedding dimension changed between calls");
  return out;
}

std::size_t CachingEmbedder::cached() const {
  std::lock_guard lock(mu_);
  return cache_.size();
}

std::vector<EmbeddingVector> CachingEmbedder::embed_batch(std::span<const std::string> texts) {
  std::vector<std::string> missing;
  {
    std::unordered_set<std::string_view> queued;
    std::lock_guard lock(mu_);
    for (const auto& t : texts) {
      if (!cache_.contains(t) && queued.insert(t).second) missing.push_back(t);
    }
  }
  if (!missing.empty()) {
    auto fresh = embed_texts(*inner_, missing);
    std::lock_guard lock(mu_);
    for (std::size_t i = 0; i < missing.size(); ++i) cache_.emplace(missing[i], std::move(fresh[i]));
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  std::lock_guard lock(mu_);
  for (const auto& t : texts) out.push_back(cache_.at(t));
  return out;
}

}  // namespace intentd
