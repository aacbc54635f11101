// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcbench {

/// Stable error identifiers surfaced in messages, reports, and CLI exit codes.
enum class ErrorCode {
  // Input and validation failures (CLI exit code 1).
  ParseError,
  DuplicateRecord,
  MismatchedInstance,
  MismatchedMetrics,
  NonFiniteValue,
  EmptySequence,
  SequenceTooShort,
  OutOfRangeInput,
  ElementMismatch,
  KeyMisalignment,
  UnknownMethod,

  // Engine failures (CLI exit code 2).
  NotAPartialOrder,
  DisconnectedGraph,
  SeparationDetected,
  NotConverged,
  NoUfgSets,
  DegenerateSpread,
  InsufficientPairs,
  ConstantInput,
  DegenerateRatings,
  NoSharedMethods,

  // Soft conditions: results exist but were truncated (CLI exit code 3).
  CapExceeded,
};

std::string_view error_code_name(ErrorCode code);

/// 1 = input error, 2 = engine error, 3 = truncated result.
int error_exit_code(ErrorCode code);

/// Exception carrying a stable code; what() is "[CodeName] detail".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error("[" + std::string(error_code_name(code)) + "] " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace mcbench
