// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mcbench/davidson.hpp"
#include "mcbench/dominance.hpp"
#include "mcbench/qtext.hpp"
#include "mcbench/serialization.hpp"
#include "mcbench/ufg.hpp"

namespace mcbench {

inline constexpr const char* kVersion = "1.0.0";

/// One input file. `dataset` tags the records for per-dataset normalization
/// and provenance; it defaults to the path.
struct InputSpec {
  enum class Format { Csv, Jsonl, RawCsv };
  std::string path;
  Format format = Format::Csv;
  std::string dataset;
};

struct UfgOptions {
  std::vector<std::string> method_filter;  // required above the hard limit
  std::size_t max_size = 4;
  DepthMode mode = DepthMode::Weighted;
  std::size_t hard_limit = 8;
};

struct QTextOptions {
  enum class Normalization { PerDataset, Pooled };
  std::string params_path;  // empty: defaults (tune writes its own)
  bool run_tune = false;
  std::string ratings_path;
  TuneConfig tune_config;
  Normalization normalization = Normalization::PerDataset;
};

/// Declarative run description; loadable from JSON (see run_config_from_json
/// for the schema).
struct RunConfig {
  std::vector<InputSpec> inputs;
  MetricSchema schema = MetricSchema::standard();
  std::vector<std::string> engines;  // subset of "davidson", "ufg", "qtext"
  FitConfig davidson;
  UfgOptions ufg;
  QTextOptions qtext;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
};

RunConfig run_config_from_json(const Json& j);
RunConfig load_run_config(const std::string& path);

/// A record row paired with the dataset tag of its input file.
struct TaggedRecords {
  std::vector<MetricRecord> records;
  std::map<std::string, std::vector<std::size_t>> by_dataset;  // tag -> indices
  std::vector<std::string> providers;  // raw-input log-prob providers, if any
};

/// Parses the tabular CSV form (header-resolved columns instance_id,
/// method_id, one column per schema metric; no extras). Throws ParseError
/// with line numbers, NonFiniteValue, DuplicateRecord.
std::vector<MetricRecord> ingest_csv(const std::string& text, const MetricSchema& schema);

/// JSON-lines with the same keys as the CSV columns.
std::vector<MetricRecord> ingest_jsonl(const std::string& text,
                                       const MetricSchema& schema);

/// Raw-input CSV (instance_id, method_id, tokens, logprobs[, provider]):
/// tokens and logprobs are embedded JSON arrays; the three standard metrics
/// are computed here. Distinct provider names are collected as metadata.
std::vector<MetricRecord> ingest_raw_csv(const std::string& text,
                                         std::vector<std::string>* providers = nullptr);

/// Ratings CSV with header key,rating.
Ratings load_ratings_csv(const std::string& text);

/// Loads all configured inputs, validating cross-file duplicates.
TaggedRecords load_inputs(const RunConfig& cfg);

/// Report builders shared by run() and the CLI verbs. Each returns a
/// deterministic JSON document.
Json dominance_report(const std::vector<MetricRecord>& records,
                      const MetricSchema& schema);
Json bt_report(const std::vector<MetricRecord>& records, const MetricSchema& schema,
               const FitConfig& cfg);
Json ufg_report(const std::vector<MetricRecord>& records, const MetricSchema& schema,
                const UfgOptions& options);
Json qtext_score_report(const TaggedRecords& tagged, const MetricSchema& schema,
                        const QTextParams& params, QTextOptions::Normalization norm);
Json qtext_tune_report(const TaggedRecords& tagged, const MetricSchema& schema,
                       const Ratings& ratings, const QTextOptions& options,
                       std::uint64_t seed);

/// Rank agreement between the paired-comparison worths and mean composite
/// scores over the shared methods. Throws NoSharedMethods.
struct AgreementReport {
  std::vector<std::string> methods;      // sorted shared methods
  std::vector<std::size_t> rank_worth;   // 1-based rank under worths
  std::vector<std::size_t> rank_qtext;   // 1-based rank under mean scores
  std::vector<long> discrepancy;         // rank_worth - rank_qtext
  std::vector<std::size_t> top_k_overlap;  // entry k-1: |top-k ∩ top-k|
  double rank_correlation = 0.0;         // NaN when fewer than 2 methods
};

AgreementReport agreement(const WorthTable& worths,
                          const std::map<std::string, double>& qtext_means);
Json agreement_to_json(const AgreementReport& report);

/// Renders a report kind ("dominance", "bt", "ufg", "qtext", "agreement",
/// "tune") as an aligned text table.
std::string render_table(const std::string& kind, const Json& report);

struct RunResult {
  std::map<std::string, Json> reports;  // file stem -> document
  Json manifest;
  bool truncated = false;  // some engine hit a cap (CLI exit 3)
};

/// Runs the selected engines over the configured inputs. Engine errors are
/// rethrown with the engine name prefixed to the detail. The manifest
/// records input and report digests, the seed, and the version; identical
/// inputs, config, and seed give byte-identical documents.
RunResult run(const RunConfig& cfg);

/// Writes every report plus the manifest as pretty-printed JSON under
/// out_dir (created when missing).
void write_reports(const RunResult& result, const std::string& out_dir);

}  // namespace mcbench
