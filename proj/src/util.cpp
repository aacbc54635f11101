// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include "mcbench/util.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mcbench/errors.hpp"

namespace mcbench {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateRecord: return "DuplicateRecord";
    case ErrorCode::MismatchedInstance: return "MismatchedInstance";
    case ErrorCode::MismatchedMetrics: return "MismatchedMetrics";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::SequenceTooShort: return "SequenceTooShort";
    case ErrorCode::OutOfRangeInput: return "OutOfRangeInput";
    case ErrorCode::ElementMismatch: return "ElementMismatch";
    case ErrorCode::KeyMisalignment: return "KeyMisalignment";
    case ErrorCode::UnknownMethod: return "UnknownMethod";
    case ErrorCode::NotAPartialOrder: return "NotAPartialOrder";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::SeparationDetected: return "SeparationDetected";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NoUfgSets: return "NoUfgSets";
    case ErrorCode::DegenerateSpread: return "DegenerateSpread";
    case ErrorCode::InsufficientPairs: return "InsufficientPairs";
    case ErrorCode::ConstantInput: return "ConstantInput";
    case ErrorCode::DegenerateRatings: return "DegenerateRatings";
    case ErrorCode::NoSharedMethods: return "NoSharedMethods";
    case ErrorCode::CapExceeded: return "CapExceeded";
  }
  return "UnknownError";
}

int error_exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::DuplicateRecord:
    case ErrorCode::MismatchedInstance:
    case ErrorCode::MismatchedMetrics:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::EmptySequence:
    case ErrorCode::SequenceTooShort:
    case ErrorCode::OutOfRangeInput:
    case ErrorCode::ElementMismatch:
    case ErrorCode::KeyMisalignment:
    case ErrorCode::UnknownMethod:
      return 1;
    case ErrorCode::NotAPartialOrder:
    case ErrorCode::DisconnectedGraph:
    case ErrorCode::SeparationDetected:
    case ErrorCode::NotConverged:
    case ErrorCode::NoUfgSets:
    case ErrorCode::DegenerateSpread:
    case ErrorCode::InsufficientPairs:
    case ErrorCode::ConstantInput:
    case ErrorCode::DegenerateRatings:
    case ErrorCode::NoSharedMethods:
      return 2;
    case ErrorCode::CapExceeded:
      return 3;
  }
  return 2;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  // Trim to the shortest representation that round-trips.
  for (int precision = 1; precision < 17; ++precision) {
    char shorter[64];
    std::snprintf(shorter, sizeof(shorter), "%.*g", precision, value);
    if (std::strtod(shorter, nullptr) == value) return shorter;
  }
  return buf;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(text.substr(start));
      return parts;
    }
    parts.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

double parse_double_strict(std::string_view text, std::string_view context) {
  if (text.empty()) {
    throw Error(ErrorCode::ParseError, "empty numeric field " + std::string(context));
  }
  std::string copy(text);
  char* end = nullptr;
  double value = std::strtod(copy.c_str(), &end);
  if (end == nullptr || *end != '\0') {
    throw Error(ErrorCode::ParseError,
                "cannot parse '" + copy + "' as a number " + std::string(context));
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NonFiniteValue,
                "non-finite value '" + copy + "' " + std::string(context));
  }
  return value;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::ParseError, "cannot open file for writing: " + path);
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw Error(ErrorCode::ParseError, "short write to file: " + path);
  }
}

}  // namespace mcbench
