// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <deque>
#include <mutex>
#include <string>
#include <vector>

#include "intentd/http.hpp"

namespace intentd::testing {

/// Replies from a fixed queue and records every request. Once the queue is
/// drained it keeps answering with the last reply.
class ScriptedTransport final : public HttpTransport {
 public:
  struct Call {
    std::string url;
    std::string token;
    std::string body;
  };

  explicit ScriptedTransport(std::deque<HttpResponse> replies) : replies_(std::move(replies)) {}

  HttpResponse post_json(const HttpEndpoint& endpoint, const std::string& path, const std::string& body) override {
    std::lock_guard lock(mu_);
    calls_.push_back({endpoint.base_url + path, endpoint.bearer_token, body});
    if (replies_.size() > 1) {
      HttpResponse r = replies_.front();
      replies_.pop_front();
      return r;
    }
    return replies_.empty() ? HttpResponse{0, "", "no scripted reply"} : replies_.front();
  }

  std::vector<Call> calls() const {
    std::lock_guard lock(mu_);
    return calls_;
  }

 private:
  mutable std::mutex mu_;
  std::deque<HttpResponse> replies_;
  std::vector<Call> calls_;
};

/// Retry policy that records delays instead of sleeping.
inline RetryPolicy no_sleep_policy(int attempts, std::vector<std::chrono::milliseconds>* delays = nullptr) {
  RetryPolicy p;
  p.max_attempts = attempts;
  p.sleep = [delays](std::chrono::milliseconds d) {
    if (delays != nullptr) delays->push_back(d);
  };
  return p;
}

}  // namespace intentd::testing
