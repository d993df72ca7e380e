// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentd/llm.hpp"

#include <nlohmann/json.hpp>

#include "intentd/digest.hpp"
#include "intentd/error.hpp"

namespace intentd {

using nlohmann::json;

void validate_request(const CompletionRequest& request) {
  if (!(request.temperature >= 0.0 && request.temperature <= 2.0)) {
    fail(ErrorCode::kValidationError, "temperature must be within [0, 2], got " + std::to_string(request.temperature));
  }
  if (request.user_text.empty()) fail(ErrorCode::kValidationError, "completion request has empty user text");
  if (request.max_output_tokens <= 0) fail(ErrorCode::kValidationError, "max_output_tokens must be positive");
}

std::string canonical_request(const CompletionRequest& request) {
  json j = {{"model", request.model_id},
            {"system", request.system_text ? json(*request.system_text) : json(nullptr)},
            {"user", request.user_text},
            {"temperature", request.temperature},
            {"max_output_tokens", request.max_output_tokens}};
  return j.dump();
}

std::string request_digest(const CompletionRequest& request) { return sha256_hex(canonical_request(request)); }

CompletionResponse complete(LlmBackend& backend, const CompletionRequest& request) {
  validate_request(request);
  return backend.do_complete(request);
}

// -- ExchangeLog -------------------------------------------------------------

ExchangeLog::ExchangeLog(const std::filesystem::path& file) : out_(file, std::ios::app) {
  if (!out_) fail(ErrorCode::kIoError, "cannot open exchange log " + file.string());
}

void ExchangeLog::append(const Entry& e) {
  std::lock_guard lock(mu_);
  entries_.push_back(e);
  if (out_.is_open()) {
    json j = {{"digest", e.request_digest}, {"model", e.model_id}, {"attempt", e.attempt}, {"status", e.status},
              {"error", e.error}, {"latency_ms", e.latency_ms}, {"response", e.response_text}};
    out_ << j.dump() << '\n';
    out_.flush();
  }
}

std::vector<ExchangeLog::Entry> ExchangeLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

// -- RemoteChatBackend -------------------------------------------------------

RemoteChatBackend::RemoteChatBackend(HttpEndpoint endpoint, RetryPolicy retry,
                                     std::shared_ptr<HttpTransport> transport, std::shared_ptr<ExchangeLog> log)
    : endpoint_(std::move(endpoint)),
      retry_(std::move(retry)),
      transport_(transport ? std::move(transport) : make_default_transport()),
      log_(std::move(log)) {}

CompletionResponse RemoteChatBackend::do_complete(const CompletionRequest& request) {
  json messages = json::array();
  if (request.system_text) messages.push_back({{"role", "system"}, {"content", *request.system_text}});
  messages.push_back({{"role", "user"}, {"content", request.user_text}});
  const json body = {{"model", request.model_id},
                     {"messages", messages},
                     {"temperature", request.temperature},
                     {"max_tokens", request.max_output_tokens}};
  const std::string digest = request_digest(request);
  const auto t0 = std::chrono::steady_clock::now();

  const HttpCallResult call =
      post_with_retry(*transport_, endpoint_, "/chat/completions", body.dump(), retry_, [&](const AttemptRecord& a) {
        if (log_ && a.status / 100 != 2) {
          log_->append({digest, request.model_id, a.attempt, a.status, a.error, a.latency.count(), ""});
        }
      });

  CompletionResponse out;
  out.attempts = static_cast<int>(call.attempts.size());
  out.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  try {
    const json res = json::parse(call.response.body);
    const json& content = res.at("choices").at(0).at("message").at("content");
    out.text = content.is_string() ? content.get<std::string>() : std::string();
    if (auto u = res.find("usage"); u != res.end() && u->is_object()) {
      out.usage = TokenUsage{u->value("prompt_tokens", 0), u->value("completion_tokens", 0)};
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kBackendError, std::string("malformed chat completion response: ") + e.what());
  }
  if (log_) {
    const auto& last = call.attempts.back();
    log_->append({digest, request.model_id, last.attempt, last.status, "", last.latency.count(), out.text});
  }
  return out;
}

// -- ScriptedBackend ---------------------------------------------------------

ScriptedBackend::ScriptedBackend(std::vector<std::string> replies) : replies_(replies.begin(), replies.end()) {}

CompletionResponse ScriptedBackend::do_complete(const CompletionRequest& request) {
  std::lock_guard lock(mu_);
  seen_.push_back(request);
  if (replies_.empty()) fail(ErrorCode::kBackendError, "scripted backend has no replies left");
  CompletionResponse out;
  out.text = std::move(replies_.front());
  replies_.pop_front();
  return out;
}

std::vector<CompletionRequest> ScriptedBackend::requests() const {
  std::lock_guard lock(mu_);
  return seen_;
}

std::size_t ScriptedBackend::calls() const {
  std::lock_guard lock(mu_);
  return seen_.size();
}

CompletionResponse CountingBackend::do_complete(const CompletionRequest& request) {
  {
    std::lock_guard lock(mu_);
    ++calls_;
  }
  return complete(*inner_, request);
}

std::size_t CountingBackend::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

}  // namespace intentd
