// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "intentd/http.hpp"

#include <algorithm>
#include <thread>

#include "intentd/error.hpp"
#include "intentd/rng.hpp"

namespace intentd {
namespace {

struct SplitUrl {
  std::string scheme_host_port;
  std::string path_prefix;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) fail(ErrorCode::kValidationError, "base URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.scheme_host_port = url.substr(0, path_start);
  if (path_start != std::string::npos) out.path_prefix = url.substr(path_start);
  while (!out.path_prefix.empty() && out.path_prefix.back() == '/') out.path_prefix.pop_back();
  return out;
}

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse post_json(const HttpEndpoint& endpoint, const std::string& path, const std::string& body) override {
    const SplitUrl url = split_url(endpoint.base_url);
    httplib::Client client(url.scheme_host_port);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
    client.set_connection_timeout(std::max<long>(1, static_cast<long>(secs.count() / 4)), 0);
    client.set_read_timeout(secs.count(), 0);
    client.set_write_timeout(secs.count(), 0);
    httplib::Headers headers;
    if (!endpoint.bearer_token.empty()) headers.emplace("Authorization", "Bearer " + endpoint.bearer_token);
    auto res = client.Post(url.path_prefix + path, headers, body, "application/json");
    HttpResponse out;
    if (!res) {
      out.transport_error = httplib::to_string(res.error());
      return out;
    }
    out.status = res->status;
    out.body = res->body;
    return out;
  }
};

}  // namespace

std::shared_ptr<HttpTransport> make_default_transport() { return std::make_shared<HttplibTransport>(); }

HttpFailureKind classify_status(int status) {
  if (status == 0 || status == 408 || status == 429 || status >= 500) return HttpFailureKind::kTransient;
  if (status == 401 || status == 403) return HttpFailureKind::kAuth;
  return HttpFailureKind::kNonRetryable;
}

HttpCallResult post_with_retry(HttpTransport& transport, const HttpEndpoint& endpoint, const std::string& path,
                               const std::string& body, const RetryPolicy& policy,
                               const std::function<void(const AttemptRecord&)>& on_attempt) {
  const int max_attempts = std::max(1, policy.max_attempts);
  Rng jitter(policy.jitter_seed);
  HttpCallResult result;
  for (int attempt = 1;; ++attempt) {
    const auto t0 = std::chrono::steady_clock::now();
    HttpResponse res = transport.post_json(endpoint, path, body);
    AttemptRecord rec;
    rec.attempt = attempt;
    rec.status = res.status;
    rec.error = res.status == 0 ? res.transport_error : (res.status >= 300 ? res.body.substr(0, 200) : "");
    rec.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    result.attempts.push_back(rec);
    if (on_attempt) on_attempt(rec);

    if (res.status >= 200 && res.status < 300) {
      result.response = std::move(res);
      return result;
    }
    const std::string what = path + ": " + (res.status == 0 ? "transport error: " + res.transport_error
                                                            : "HTTP " + std::to_string(res.status));
    switch (classify_status(res.status)) {
      case HttpFailureKind::kAuth:
        fail(ErrorCode::kAuthError, what);
      case HttpFailureKind::kNonRetryable:
        fail(ErrorCode::kNonRetryable, what + " " + res.body.substr(0, 200));
      case HttpFailureKind::kTransient:
        break;
    }
    if (attempt >= max_attempts) {
      fail(ErrorCode::kTransientExhausted, what + " after " + std::to_string(attempt) + " attempts");
    }
    const double exp = static_cast<double>(policy.base_delay.count()) * static_cast<double>(1ULL << std::min(attempt - 1, 30));
    const double capped = std::min(exp, static_cast<double>(policy.max_delay.count()));
    const auto delay = std::chrono::milliseconds(static_cast<long long>(capped * (0.5 + 0.5 * jitter.uniform_real())));
    if (policy.sleep) {
      policy.sleep(delay);
    } else {
      std::this_thread::sleep_for(delay);
    }
  }
}

}  // namespace intentd
