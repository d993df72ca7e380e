// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace intentd {

// Numeric values are part of the C ABI (see intentd.h); append only.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kEmptyLabel = 2,
  kParseError = 3,
  kUnknownFormat = 4,
  kInvalidRatio = 5,
  kEmptyInput = 6,
  kProviderError = 7,
  kDimensionMismatch = 8,
  kZeroVector = 9,
  kEmptyPool = 10,
  kEmptyText = 11,
  kMissingExamples = 12,
  kBackendError = 13,
  kEmptyGeneration = 14,
  kBudgetExceeded = 15,
  kCountMismatch = 16,
  kUnparseable = 17,
  kForbiddenLabel = 18,
  kValidationError = 19,
  kTransientExhausted = 20,
  kAuthError = 21,
  kNonRetryable = 22,
  kMissingAnswer = 23,
  kCassetteMiss = 24,
  kInvalidK = 25,
  kNonFinite = 26,
  kLengthMismatch = 27,
  kTooFewSamples = 28,
  kNumericalFailure = 29,
  kIoError = 30,
  kPartialRun = 31,
  kBufferTooSmall = 32,
  kNotFound = 33,
  kInternal = 34,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Process exit code for a failure of this kind: 1 validation, 2 backend, 3 partial run.
int exit_code_for(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace intentd
