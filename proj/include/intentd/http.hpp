// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace intentd {

/// Base URL such as "https://api.openai.com/v1" plus an optional bearer token.
struct HttpEndpoint {
  std::string base_url;
  std::string bearer_token;
  std::chrono::milliseconds timeout{120'000};
};

struct HttpResponse {
  int status = 0;            // 0 when the request never produced a response
  std::string body;
  std::string transport_error;  // set when status == 0
};

/// Minimal POST-JSON transport so tests can script server behaviour.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post_json(const HttpEndpoint& endpoint, const std::string& path,
                                 const std::string& body) = 0;
};

/// cpp-httplib backed transport (http and https).
std::shared_ptr<HttpTransport> make_default_transport();

/// Exponential backoff with full jitter: delay_n = U(0.5, 1) * min(cap, base * 2^n).
struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{1000};
  std::chrono::milliseconds max_delay{60'000};
  std::uint64_t jitter_seed = 0;
  /// Replaceable for tests; defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;
};

struct AttemptRecord {
  int attempt = 0;
  int status = 0;
  std::string error;
  std::chrono::milliseconds latency{0};
};

struct HttpCallResult {
  HttpResponse response;  // the successful (2xx) response
  std::vector<AttemptRecord> attempts;
};

enum class HttpFailureKind { kTransient, kAuth, kNonRetryable };
HttpFailureKind classify_status(int status);

/// POSTs with bounded retries. Retries 429, 5xx and transport failures; never
/// mutates the body between attempts. Throws AuthError (401/403), NonRetryable
/// (other 4xx), TransientExhausted. `on_attempt` sees every attempt.
HttpCallResult post_with_retry(HttpTransport& transport, const HttpEndpoint& endpoint,
                               const std::string& path, const std::string& body,
                               const RetryPolicy& policy,
                               const std::function<void(const AttemptRecord&)>& on_attempt = {});

}  // namespace intentd
