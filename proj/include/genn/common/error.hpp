// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace genn {

enum class ErrorCode {
  kShapeMismatch,
  kNonFinite,
  kNonScalarLoss,
  kInvalidArgument,
  kParse,
  kDuplicateEdge,
  kNodeOutOfRange,
  kRatioSum,
  kDegenerateGraph,
  kDivergence,
  kEmptySplit,
  kQueryOverlapsTrain,
  kDegenerateLabels,
  kNoPositives,
  kEmptyEvaluation,
  kConstantVector,
  kMemoryBound,
  kConfig,
  kIo,
  kCheckpoint,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code is what callers branch on.
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

/// Runs `fn`, reporting a non-finite value as divergence of `what`.
template <class Fn>
decltype(auto) guard_divergence(std::string_view what, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonFinite) throw;
    fail(ErrorCode::kDivergence, std::string(what) + " diverged: " + e.what());
  }
}

}  // namespace genn
