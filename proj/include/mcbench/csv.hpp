// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mcbench {

/// A parsed CSV table: a header row plus data rows, all as strings.
/// Field values have quotes removed and escaped quotes ("") unescaped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based source line of each data row, for error messages.
  std::vector<std::size_t> row_lines;

  /// Index of the named header column, or -1 when absent.
  int column(std::string_view name) const;

  /// Like column() but throws ParseError naming the missing column.
  std::size_t require_column(std::string_view name) const;
};

/// Parses CSV text. Supports quoted fields with embedded commas, quotes
/// ("" escaping), and newlines; accepts both \n and \r\n row endings.
/// Throws ParseError with a line number on malformed input (unterminated
/// quote, text after a closing quote, ragged row width).
CsvTable parse_csv(std::string_view text);

/// Quotes a value if it contains a comma, quote, or newline.
std::string csv_escape(std::string_view value);

}  // namespace mcbench
