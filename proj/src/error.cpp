// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentd/error.hpp"

namespace intentd {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyLabel: return "EmptyLabel";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kUnknownFormat: return "UnknownFormat";
    case ErrorCode::kInvalidRatio: return "InvalidRatio";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kProviderError: return "ProviderError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kEmptyPool: return "EmptyPool";
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kMissingExamples: return "MissingExamples";
    case ErrorCode::kBackendError: return "BackendError";
    case ErrorCode::kEmptyGeneration: return "EmptyGeneration";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kUnparseable: return "Unparseable";
    case ErrorCode::kForbiddenLabel: return "ForbiddenLabel";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kTransientExhausted: return "TransientExhausted";
    case ErrorCode::kAuthError: return "AuthError";
    case ErrorCode::kNonRetryable: return "NonRetryable";
    case ErrorCode::kMissingAnswer: return "MissingAnswer";
    case ErrorCode::kCassetteMiss: return "CassetteMiss";
    case ErrorCode::kInvalidK: return "InvalidK";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kPartialRun: return "PartialRun";
    case ErrorCode::kBufferTooSmall: return "BufferTooSmall";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk:
      return 0;
    case ErrorCode::kProviderError:
    case ErrorCode::kBackendError:
    case ErrorCode::kEmptyGeneration:
    case ErrorCode::kTransientExhausted:
    case ErrorCode::kAuthError:
    case ErrorCode::kNonRetryable:
    case ErrorCode::kMissingAnswer:
    case ErrorCode::kCassetteMiss:
    case ErrorCode::kCountMismatch:
    case ErrorCode::kUnparseable:
    case ErrorCode::kForbiddenLabel:
      return 2;
    case ErrorCode::kPartialRun:
      return 3;
    default:
      return 1;
  }
}

}  // namespace intentd
