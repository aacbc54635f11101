// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include "mcbench/csv.hpp"

#include "mcbench/errors.hpp"

namespace mcbench {

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::size_t CsvTable::require_column(std::string_view name) const {
  int idx = column(name);
  if (idx < 0) {
    throw Error(ErrorCode::ParseError,
                "missing required column '" + std::string(name) + "' in CSV header");
  }
  return static_cast<std::size_t>(idx);
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool record_has_content = false;

  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    field_was_quoted = false;
  };

  auto end_record = [&](std::size_t at_line) {
    end_field();
    // A completely empty line between records is skipped, not a ragged row.
    if (record.size() == 1 && record[0].empty() && !record_has_content) {
      record.clear();
      return;
    }
    if (table.header.empty()) {
      table.header = std::move(record);
    } else {
      if (record.size() != table.header.size()) {
        throw Error(ErrorCode::ParseError,
                    "row at line " + std::to_string(at_line) + " has " +
                        std::to_string(record.size()) + " fields, header has " +
                        std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(record));
      table.row_lines.push_back(at_line);
    }
    record.clear();
    record_has_content = false;
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field.push_back('"');
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
        ++i;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw Error(ErrorCode::ParseError,
                      "unexpected quote inside unquoted field at line " + std::to_string(line));
        }
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        ++i;
        break;
      case ',':
        end_field();
        record_has_content = true;
        ++i;
        break;
      case '\r':
        if (i + 1 < n && text[i + 1] == '\n') {
          end_record(record_line);
          ++line;
          record_line = line;
          i += 2;
        } else {
          throw Error(ErrorCode::ParseError,
                      "bare carriage return at line " + std::to_string(line));
        }
        break;
      case '\n':
        end_record(record_line);
        ++line;
        record_line = line;
        ++i;
        break;
      default:
        if (field_was_quoted) {
          throw Error(ErrorCode::ParseError,
                      "text after closing quote at line " + std::to_string(line));
        }
        field.push_back(c);
        record_has_content = true;
        ++i;
        break;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::ParseError,
                "unterminated quoted field starting before line " + std::to_string(line));
  }
  // Flush a final record without a trailing newline.
  if (!field.empty() || field_was_quoted || !record.empty() || record_has_content) {
    end_record(record_line);
  }
  return table;
}

std::string csv_escape(std::string_view value) {
  bool needs_quotes = false;
  for (char c : value) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return std::string(value);
  std::string out;
  out.reserve(value.size() + 2);
  out.push_back('"');
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace mcbench
