// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "mcbench/csv.hpp"
#include "mcbench/errors.hpp"
#include "mcbench/rng.hpp"
#include "mcbench/sha256.hpp"
#include "mcbench/util.hpp"

using mcbench::CsvTable;
using mcbench::Error;
using mcbench::ErrorCode;

TEST_CASE("csv: plain rows and header lookup") {
  CsvTable t = mcbench::parse_csv("a,b,c\n1,2,3\n4,5,6\n");
  CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1] == std::vector<std::string>{"4", "5", "6"});
  CHECK(t.column("b") == 1);
  CHECK(t.column("zz") == -1);
  CHECK(t.require_column("c") == 2);
  CHECK_THROWS_AS(t.require_column("zz"), Error);
  CHECK(t.row_lines == std::vector<std::size_t>{2, 3});
}

TEST_CASE("csv: quoted fields carry commas, quotes, and newlines") {
  CsvTable t = mcbench::parse_csv("k,v\n\"a,b\",\"say \"\"hi\"\"\"\n\"line\nbreak\",x\n");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "a,b");
  CHECK(t.rows[0][1] == "say \"hi\"");
  CHECK(t.rows[1][0] == "line\nbreak");
  // The embedded newline advances the source line count.
  CHECK(t.row_lines == std::vector<std::size_t>{2, 3});
}

TEST_CASE("csv: windows line endings and missing final newline") {
  CsvTable t = mcbench::parse_csv("a,b\r\n1,2\r\n3,4");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1] == std::vector<std::string>{"3", "4"});
}

TEST_CASE("csv: blank lines are skipped") {
  CsvTable t = mcbench::parse_csv("a,b\n\n1,2\n\n\n3,4\n\n");
  CHECK(t.rows.size() == 2);
  CHECK(t.row_lines == std::vector<std::size_t>{3, 6});
}

TEST_CASE("csv: ragged rows are rejected with the line number") {
  try {
    mcbench::parse_csv("a,b\n1,2\n1,2,3\n");
    FAIL_CHECK("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("csv: unterminated quotes and trailing text are rejected") {
  CHECK_THROWS_AS(mcbench::parse_csv("a,b\n\"open,2\n"), Error);
  CHECK_THROWS_AS(mcbench::parse_csv("a,b\n\"x\"tail,2\n"), Error);
}

TEST_CASE("csv: escape round-trips arbitrary field content") {
  mcbench::Rng rng(161);
  const std::string alphabet = "ab,\"\n x";
  for (int trial = 0; trial < 200; ++trial) {
    std::string value;
    std::size_t len = rng.below(12);
    for (std::size_t i = 0; i < len; ++i) value.push_back(alphabet[rng.below(alphabet.size())]);
    if (!value.empty() && value.front() == ' ') continue;  // keep the comparison simple
    std::string text = "k\n" + mcbench::csv_escape(value) + "\n";
    CsvTable t = mcbench::parse_csv(text);
    if (value.empty()) {
      CHECK(t.rows.empty());  // a lone empty field renders as a blank line
    } else {
      REQUIRE(t.rows.size() == 1);
      CHECK(t.rows[0][0] == value);
    }
  }
}

TEST_CASE("util: shortest round-trip double formatting") {
  CHECK(mcbench::format_double(0.25) == "0.25");
  CHECK(mcbench::format_double(1.0) == "1");
  CHECK(mcbench::format_double(-0.1) == "-0.1");
  mcbench::Rng rng(828);
  for (int trial = 0; trial < 1000; ++trial) {
    double value = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-6.0, 6.0));
    std::string text = mcbench::format_double(value);
    CHECK(std::stod(text) == value);
  }
}

TEST_CASE("util: fixed formatting") {
  CHECK(mcbench::format_fixed(0.25, 4) == "0.2500");
  CHECK(mcbench::format_fixed(-1.5, 2) == "-1.50");
}

TEST_CASE("util: strict double parsing") {
  CHECK(mcbench::parse_double_strict("3.5", "") == 3.5);
  CHECK(mcbench::parse_double_strict("-2e3", "") == -2000.0);
  CHECK_THROWS_AS(mcbench::parse_double_strict("", "at line 4"), Error);
  CHECK_THROWS_AS(mcbench::parse_double_strict("3.5x", ""), Error);
  CHECK_THROWS_AS(mcbench::parse_double_strict("abc", ""), Error);
  try {
    mcbench::parse_double_strict("nan", "at line 7");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteValue);
    CHECK(std::string(e.what()).find("line 7") != std::string::npos);
  }
  try {
    mcbench::parse_double_strict("inf", "");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteValue);
  }
}

TEST_CASE("util: split and join") {
  CHECK(mcbench::split("a,b,,c", ',') ==
        std::vector<std::string>{"a", "b", "", "c"});
  CHECK(mcbench::join({"a", "b", "c"}, ", ") == "a, b, c");
  CHECK(mcbench::join({}, ",").empty());
}

TEST_CASE("sha256: reference vectors") {
  CHECK(mcbench::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(mcbench::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(mcbench::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");

  // Incremental updates match the one-shot digest.
  mcbench::Sha256 h;
  h.update("ab");
  h.update("c");
  CHECK(h.hex_digest() == mcbench::sha256_hex("abc"));

  // A long input crossing many block boundaries.
  std::string million(1000000, 'a');
  CHECK(mcbench::sha256_hex(million) ==
        "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("errors: codes carry names, details, and exit codes") {
  Error e(ErrorCode::DuplicateRecord, "row 5 repeats");
  CHECK(std::string(e.what()) == "[DuplicateRecord] row 5 repeats");
  CHECK(e.detail() == "row 5 repeats");
  CHECK(mcbench::error_exit_code(ErrorCode::DuplicateRecord) == 1);
  CHECK(mcbench::error_exit_code(ErrorCode::NotConverged) == 2);
  CHECK(mcbench::error_exit_code(ErrorCode::DisconnectedGraph) == 2);
  CHECK(mcbench::error_exit_code(ErrorCode::CapExceeded) == 3);
  CHECK(std::string(mcbench::error_code_name(ErrorCode::NoUfgSets)) == "NoUfgSets");
}
