// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mcbench {

/// Shortest decimal string that parses back to exactly the same double.
/// Used everywhere a floating value is written, so output is deterministic.
std::string format_double(double value);

/// Fixed-point rendering, e.g. format_fixed(0.25, 4) == "0.2500".
std::string format_fixed(double value, int decimals);

std::vector<std::string> split(std::string_view text, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Parses a double and rejects trailing garbage, empty fields, and non-finite
/// values. `context` is appended to the error detail (e.g. "at line 12").
double parse_double_strict(std::string_view text, std::string_view context);

std::string read_file(const std::string& path);

void write_file(const std::string& path, std::string_view content);

}  // namespace mcbench
