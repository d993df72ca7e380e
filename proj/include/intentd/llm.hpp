// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "intentd/http.hpp"

namespace intentd {

struct CompletionRequest {
  std::optional<std::string> system_text;
  std::string user_text;
  double temperature = 0.7;
  int max_output_tokens = 1024;
  std::string model_id;
};

struct TokenUsage {
  int prompt_tokens = 0;
  int output_tokens = 0;
};

struct CompletionResponse {
  std::string text;
  std::optional<TokenUsage> usage;
  std::chrono::milliseconds latency{0};
  int attempts = 1;
};

/// Throws ValidationError unless 0 <= temperature <= 2, user_text is non-empty
/// and max_output_tokens > 0.
void validate_request(const CompletionRequest& request);

/// Canonical JSON of a request; its SHA-256 is the cassette key.
std::string canonical_request(const CompletionRequest& request);
std::string request_digest(const CompletionRequest& request);

/// One request in, one textual response out. Implementations are safe for
/// concurrent calls.
class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string name() const = 0;

 protected:
  friend CompletionResponse complete(LlmBackend&, const CompletionRequest&);
  virtual CompletionResponse do_complete(const CompletionRequest& request) = 0;
};

/// Validates, then dispatches to the backend.
CompletionResponse complete(LlmBackend& backend, const CompletionRequest& request);

/// Append-only JSONL log of every attempt made against a remote endpoint.
class ExchangeLog {
 public:
  ExchangeLog() = default;  // in-memory only
  explicit ExchangeLog(const std::filesystem::path& file);

  struct Entry {
    std::string request_digest;
    std::string model_id;
    int attempt = 0;
    int status = 0;
    std::string error;
    long long latency_ms = 0;
    std::string response_text;  // empty unless the attempt succeeded
  };
  void append(const Entry& entry);
  std::vector<Entry> entries() const;

 private:
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
  std::ofstream out_;
};

/// Chat-completion client for OpenAI-compatible endpoints
/// (`POST {base}/chat/completions`).
class RemoteChatBackend final : public LlmBackend {
 public:
  RemoteChatBackend(HttpEndpoint endpoint, RetryPolicy retry = {}, std::shared_ptr<HttpTransport> transport = nullptr,
                    std::shared_ptr<ExchangeLog> log = nullptr);
  std::string name() const override { return "remote:" + endpoint_.base_url; }

 protected:
  CompletionResponse do_complete(const CompletionRequest& request) override;

 private:
  HttpEndpoint endpoint_;
  RetryPolicy retry_;
  std::shared_ptr<HttpTransport> transport_;
  std::shared_ptr<ExchangeLog> log_;
};

/// Returns canned replies in order; throws BackendError once exhausted.
/// Records every request it sees.
class ScriptedBackend final : public LlmBackend {
 public:
  explicit ScriptedBackend(std::vector<std::string> replies);
  std::string name() const override { return "scripted"; }
  std::vector<CompletionRequest> requests() const;
  std::size_t calls() const;

 protected:
  CompletionResponse do_complete(const CompletionRequest& request) override;

 private:
  mutable std::mutex mu_;
  std::deque<std::string> replies_;
  std::vector<CompletionRequest> seen_;
};

/// Wraps a backend and counts completions; used to check call budgets.
class CountingBackend final : public LlmBackend {
 public:
  explicit CountingBackend(std::shared_ptr<LlmBackend> inner) : inner_(std::move(inner)) {}
  std::string name() const override { return inner_->name(); }
  std::size_t calls() const;

 protected:
  CompletionResponse do_complete(const CompletionRequest& request) override;

 private:
  std::shared_ptr<LlmBackend> inner_;
  mutable std::mutex mu_;
  std::size_t calls_ = 0;
};

}  // namespace intentd
