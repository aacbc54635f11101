// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include "mcbench/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>

#include "mcbench/csv.hpp"
#include "mcbench/errors.hpp"
#include "mcbench/metrics.hpp"
#include "mcbench/sha256.hpp"
#include "mcbench/util.hpp"

namespace mcbench {
namespace {

std::string serialize_doc(const Json& doc) { return doc.dump(2) + "\n"; }

InputSpec::Format format_from_name(const std::string& name) {
  if (name == "csv") return InputSpec::Format::Csv;
  if (name == "jsonl") return InputSpec::Format::Jsonl;
  if (name == "raw_csv") return InputSpec::Format::RawCsv;
  throw Error(ErrorCode::ParseError, "unknown input format '" + name + "'");
}

std::string format_to_name(InputSpec::Format format) {
  switch (format) {
    case InputSpec::Format::Csv: return "csv";
    case InputSpec::Format::Jsonl: return "jsonl";
    case InputSpec::Format::RawCsv: return "raw_csv";
  }
  return "csv";
}

InputSpec::Format infer_format(const std::string& path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".jsonl")) return InputSpec::Format::Jsonl;
  return InputSpec::Format::Csv;
}

void reject_duplicate(std::set<std::pair<std::string, std::string>>& seen,
                      const MetricRecord& rec, std::size_t line) {
  if (!seen.emplace(rec.instance_id, rec.method_id).second) {
    std::string where = line > 0 ? " (line " + std::to_string(line) + ")" : "";
    throw Error(ErrorCode::DuplicateRecord,
                "second row for instance '" + rec.instance_id + "', method '" +
                    rec.method_id + "'" + where);
  }
}

double finite_value(double v, const std::string& metric, std::size_t line) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteValue,
                metric + " is not finite at line " + std::to_string(line));
  }
  return v;
}

}  // namespace

std::vector<MetricRecord> ingest_csv(const std::string& text, const MetricSchema& schema) {
  CsvTable table = parse_csv(text);
  if (table.header.empty()) {
    throw Error(ErrorCode::ParseError, "CSV input has no header row");
  }
  std::size_t instance_col = table.require_column("instance_id");
  std::size_t method_col = table.require_column("method_id");
  std::vector<std::size_t> metric_cols;
  for (const MetricDirection& md : schema.metrics) {
    metric_cols.push_back(table.require_column(md.name));
  }
  for (const std::string& column : table.header) {
    if (column != "instance_id" && column != "method_id" &&
        schema.metric_index(column) < 0) {
      throw Error(ErrorCode::ParseError,
                  "column '" + column + "' is not declared in the metric schema");
    }
  }

  std::vector<MetricRecord> records;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::size_t line = table.row_lines[r];
    MetricRecord rec;
    rec.instance_id = row[instance_col];
    rec.method_id = row[method_col];
    if (rec.instance_id.empty() || rec.method_id.empty()) {
      throw Error(ErrorCode::ParseError,
                  "empty instance_id or method_id at line " + std::to_string(line));
    }
    for (std::size_t k = 0; k < metric_cols.size(); ++k) {
      rec.values.push_back(parse_double_strict(
          row[metric_cols[k]],
          "in column '" + schema.metrics[k].name + "' at line " + std::to_string(line)));
    }
    reject_duplicate(seen, rec, line);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<MetricRecord> ingest_jsonl(const std::string& text,
                                       const MetricSchema& schema) {
  std::vector<MetricRecord> records;
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::string> lines = split(text, '\n');
  for (std::size_t k = 0; k < lines.size(); ++k) {
    std::string_view line = lines[k];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::size_t line_no = k + 1;
    Json obj;
    try {
      obj = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  "invalid JSON at line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object()) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + " is not a JSON object");
    }
    MetricRecord rec;
    auto get_string = [&](const char* key) {
      auto it = obj.find(key);
      if (it == obj.end() || !it->is_string()) {
        throw Error(ErrorCode::ParseError, "missing string key '" + std::string(key) +
                                               "' at line " + std::to_string(line_no));
      }
      return it->get<std::string>();
    };
    rec.instance_id = get_string("instance_id");
    rec.method_id = get_string("method_id");
    for (const MetricDirection& md : schema.metrics) {
      auto it = obj.find(md.name);
      if (it == obj.end() || !it->is_number()) {
        throw Error(ErrorCode::ParseError, "missing numeric key '" + md.name +
                                               "' at line " + std::to_string(line_no));
      }
      rec.values.push_back(finite_value(it->get<double>(), md.name, line_no));
    }
    for (const auto& [key, value] : obj.items()) {
      if (key != "instance_id" && key != "method_id" && schema.metric_index(key) < 0) {
        throw Error(ErrorCode::ParseError,
                    "key '" + key + "' is not declared in the metric schema (line " +
                        std::to_string(line_no) + ")");
      }
    }
    reject_duplicate(seen, rec, line_no);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<MetricRecord> ingest_raw_csv(const std::string& text,
                                         std::vector<std::string>* providers) {
  CsvTable table = parse_csv(text);
  if (table.header.empty()) {
    throw Error(ErrorCode::ParseError, "raw CSV input has no header row");
  }
  std::size_t instance_col = table.require_column("instance_id");
  std::size_t method_col = table.require_column("method_id");
  std::size_t tokens_col = table.require_column("tokens");
  std::size_t logprobs_col = table.require_column("logprobs");
  int provider_col = table.column("provider");
  for (const std::string& column : table.header) {
    if (column != "instance_id" && column != "method_id" && column != "tokens" &&
        column != "logprobs" && column != "provider") {
      throw Error(ErrorCode::ParseError,
                  "unexpected column '" + column + "' in raw input CSV");
    }
  }

  std::set<std::string> provider_names;
  std::vector<MetricRecord> records;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::size_t line = table.row_lines[r];
    auto parse_array = [&](std::size_t col, const char* what) {
      try {
        Json arr = Json::parse(row[col]);
        if (!arr.is_array()) {
          throw Error(ErrorCode::ParseError, std::string(what) + " is not a JSON array at line " +
                                                 std::to_string(line));
        }
        return arr;
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string(what) + " at line " +
                                               std::to_string(line) + ": " + e.what());
      }
    };
    Json token_arr = parse_array(tokens_col, "tokens");
    Json logprob_arr = parse_array(logprobs_col, "logprobs");
    TokenSequence tokens;
    for (const Json& t : token_arr) {
      tokens.push_back(t.is_string() ? t.get<std::string>() : t.dump());
    }
    LogProbSequence logprobs;
    for (const Json& lp : logprob_arr) {
      if (!lp.is_number()) {
        throw Error(ErrorCode::ParseError,
                    "logprobs entry is not a number at line " + std::to_string(line));
      }
      logprobs.push_back(lp.get<double>());
    }

    MetricRecord rec;
    rec.instance_id = row[instance_col];
    rec.method_id = row[method_col];
    try {
      double coh = coherence(logprobs);
      rec.values = {coh, diversity(tokens), std::exp(-coh)};
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line) + ": " + e.detail());
    }
    reject_duplicate(seen, rec, line);
    records.push_back(std::move(rec));
    if (provider_col >= 0 && !row[static_cast<std::size_t>(provider_col)].empty()) {
      provider_names.insert(row[static_cast<std::size_t>(provider_col)]);
    }
  }
  if (providers != nullptr) {
    providers->assign(provider_names.begin(), provider_names.end());
  }
  return records;
}

Ratings load_ratings_csv(const std::string& text) {
  CsvTable table = parse_csv(text);
  if (table.header.empty()) {
    throw Error(ErrorCode::ParseError, "ratings CSV has no header row");
  }
  std::size_t key_col = table.require_column("key");
  std::size_t rating_col = table.require_column("rating");
  Ratings ratings;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::size_t line = table.row_lines[r];
    ratings.emplace_back(table.rows[r][key_col],
                         parse_double_strict(table.rows[r][rating_col],
                                             "in column 'rating' at line " +
                                                 std::to_string(line)));
  }
  return ratings;
}

RunConfig run_config_from_json(const Json& j) {
  RunConfig cfg;
  auto inputs_it = j.find("inputs");
  if (inputs_it == j.end() || !inputs_it->is_array() || inputs_it->empty()) {
    throw Error(ErrorCode::ParseError, "config needs a nonempty 'inputs' array");
  }
  for (const Json& item : *inputs_it) {
    InputSpec spec;
    if (item.is_string()) {
      spec.path = item.get<std::string>();
      spec.format = infer_format(spec.path);
    } else if (item.is_object()) {
      spec.path = item.at("path").get<std::string>();
      spec.format = item.contains("format")
                        ? format_from_name(item["format"].get<std::string>())
                        : infer_format(spec.path);
      if (item.contains("dataset")) spec.dataset = item["dataset"].get<std::string>();
    } else {
      throw Error(ErrorCode::ParseError, "input entries must be strings or objects");
    }
    if (spec.dataset.empty()) spec.dataset = spec.path;
    cfg.inputs.push_back(std::move(spec));
  }

  if (j.contains("metrics")) {
    cfg.schema.metrics.clear();
    for (const Json& m : j["metrics"]) {
      MetricDirection md;
      md.name = m.at("name").get<std::string>();
      std::string dir = m.contains("direction") ? m["direction"].get<std::string>()
                                                : "higher";
      if (dir == "higher") {
        md.direction = Direction::HigherIsBetter;
      } else if (dir == "lower") {
        md.direction = Direction::LowerIsBetter;
      } else {
        throw Error(ErrorCode::ParseError,
                    "metric direction must be 'higher' or 'lower', got '" + dir + "'");
      }
      cfg.schema.metrics.push_back(std::move(md));
    }
    if (cfg.schema.metrics.empty()) {
      throw Error(ErrorCode::ParseError, "metric schema cannot be empty");
    }
  }
  if (j.contains("epsilon_equal")) {
    cfg.schema.epsilon_equal = j["epsilon_equal"].get<double>();
    if (cfg.schema.epsilon_equal < 0) {
      throw Error(ErrorCode::ParseError, "epsilon_equal must be >= 0");
    }
  }

  if (j.contains("engines")) {
    for (const Json& e : j["engines"]) {
      std::string name = e.get<std::string>();
      if (name != "davidson" && name != "ufg" && name != "qtext") {
        throw Error(ErrorCode::ParseError, "unknown engine '" + name + "'");
      }
      cfg.engines.push_back(name);
    }
  }

  if (j.contains("davidson")) {
    const Json& d = j["davidson"];
    if (d.contains("zero_policy")) {
      std::string policy = d["zero_policy"].get<std::string>();
      if (policy == "error") {
        cfg.davidson.zero_policy = FitConfig::ZeroPolicy::Error;
      } else if (policy == "haldane") {
        cfg.davidson.zero_policy = FitConfig::ZeroPolicy::Haldane;
      } else {
        throw Error(ErrorCode::ParseError,
                    "zero_policy must be 'error' or 'haldane', got '" + policy + "'");
      }
    }
    if (d.contains("max_iterations")) {
      cfg.davidson.max_iterations = d["max_iterations"].get<std::size_t>();
    }
    if (d.contains("tolerance")) cfg.davidson.tolerance = d["tolerance"].get<double>();
  }

  if (j.contains("ufg")) {
    const Json& u = j["ufg"];
    if (u.contains("methods")) {
      cfg.ufg.method_filter = u["methods"].get<std::vector<std::string>>();
    }
    if (u.contains("max_size")) cfg.ufg.max_size = u["max_size"].get<std::size_t>();
    if (u.contains("hard_limit")) cfg.ufg.hard_limit = u["hard_limit"].get<std::size_t>();
    if (u.contains("mode")) {
      std::string mode = u["mode"].get<std::string>();
      if (mode == "weighted") {
        cfg.ufg.mode = DepthMode::Weighted;
      } else if (mode == "uniform_count") {
        cfg.ufg.mode = DepthMode::UniformCount;
      } else {
        throw Error(ErrorCode::ParseError,
                    "ufg mode must be 'weighted' or 'uniform_count', got '" + mode + "'");
      }
    }
  }

  if (j.contains("qtext")) {
    const Json& q = j["qtext"];
    if (q.contains("params")) cfg.qtext.params_path = q["params"].get<std::string>();
    if (q.contains("tune")) cfg.qtext.run_tune = q["tune"].get<bool>();
    if (q.contains("ratings")) cfg.qtext.ratings_path = q["ratings"].get<std::string>();
    if (q.contains("trials")) {
      cfg.qtext.tune_config.max_trials = q["trials"].get<std::size_t>();
    }
    if (q.contains("restarts")) {
      cfg.qtext.tune_config.restarts = q["restarts"].get<std::size_t>();
    }
    if (q.contains("perturbation_scale")) {
      cfg.qtext.tune_config.perturbation_scale = q["perturbation_scale"].get<double>();
    }
    if (q.contains("normalization")) {
      std::string norm = q["normalization"].get<std::string>();
      if (norm == "per_dataset") {
        cfg.qtext.normalization = QTextOptions::Normalization::PerDataset;
      } else if (norm == "pooled") {
        cfg.qtext.normalization = QTextOptions::Normalization::Pooled;
      } else {
        throw Error(ErrorCode::ParseError,
                    "normalization must be 'per_dataset' or 'pooled', got '" + norm + "'");
      }
    }
  }

  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError,
                "config file '" + path + "' is not valid JSON: " + e.what());
  }
  return run_config_from_json(j);
}

TaggedRecords load_inputs(const RunConfig& cfg) {
  if (cfg.inputs.empty()) {
    throw Error(ErrorCode::ParseError, "no inputs configured");
  }
  TaggedRecords tagged;
  std::set<std::string> provider_names;
  const bool qualify = cfg.inputs.size() > 1;
  std::set<std::pair<std::string, std::string>> seen;
  for (const InputSpec& spec : cfg.inputs) {
    std::string text = read_file(spec.path);
    std::vector<MetricRecord> records;
    std::vector<std::string> providers;
    switch (spec.format) {
      case InputSpec::Format::Csv: records = ingest_csv(text, cfg.schema); break;
      case InputSpec::Format::Jsonl: records = ingest_jsonl(text, cfg.schema); break;
      case InputSpec::Format::RawCsv:
        records = ingest_raw_csv(text, &providers);
        break;
    }
    for (MetricRecord& rec : records) {
      if (qualify) rec.instance_id = spec.dataset + "/" + rec.instance_id;
      reject_duplicate(seen, rec, 0);
      tagged.by_dataset[spec.dataset].push_back(tagged.records.size());
      tagged.records.push_back(std::move(rec));
    }
    provider_names.insert(providers.begin(), providers.end());
  }
  tagged.providers.assign(provider_names.begin(), provider_names.end());
  return tagged;
}

Json dominance_report(const std::vector<MetricRecord>& records,
                      const MetricSchema& schema) {
  std::vector<ComparisonTally> tallies = tally(records, schema);
  std::size_t unordered = 0;
  for (const ComparisonTally& t : tallies) unordered += t.total();

  Json report;
  report["methods"] = method_roster(records);
  report["instances"] = group_by_instance(records).size();
  Json comparisons;
  comparisons["unordered"] = unordered;
  comparisons["ordered"] = 2 * unordered;
  report["comparisons"] = std::move(comparisons);
  report["pairs"] = tallies_to_json(tallies);
  Json full = Json::array();
  for (const ComparisonTally& t : tallies) {
    if (t.total() == 0) continue;
    if (t.wins_i == t.total() || t.wins_j == t.total()) {
      Json entry;
      entry["dominator"] = t.wins_i == t.total() ? t.method_i : t.method_j;
      entry["dominated"] = t.wins_i == t.total() ? t.method_j : t.method_i;
      entry["instances"] = t.total();
      full.push_back(std::move(entry));
    }
  }
  report["full_dominance"] = std::move(full);
  return report;
}

Json bt_report(const std::vector<MetricRecord>& records, const MetricSchema& schema,
               const FitConfig& cfg) {
  std::vector<ComparisonTally> tallies = tally(records, schema);
  WorthTable table = fit(tallies, cfg);
  Json report = worth_table_to_json(table);
  report["pairs"] = tallies_to_json(tallies);
  return report;
}

Json ufg_report(const std::vector<MetricRecord>& records, const MetricSchema& schema,
                const UfgOptions& options) {
  std::vector<std::string> methods = method_roster(records);
  if (!options.method_filter.empty()) {
    std::vector<std::string> filter = options.method_filter;
    std::sort(filter.begin(), filter.end());
    for (const std::string& name : filter) {
      if (!std::binary_search(methods.begin(), methods.end(), name)) {
        throw Error(ErrorCode::UnknownMethod,
                    "filter method '" + name + "' has no records");
      }
    }
    methods = std::move(filter);
  }
  if (methods.size() > options.hard_limit) {
    throw Error(ErrorCode::OutOfRangeInput,
                "union-free generic enumeration over " + std::to_string(methods.size()) +
                    " methods exceeds the hard limit " +
                    std::to_string(options.hard_limit) +
                    "; restrict with a method filter");
  }

  std::size_t skipped = 0;
  PosetSet observed = observed_posets(records, methods, schema, &skipped);
  DepthResult result = rank_by_depth(observed, observed.posets, options.mode,
                                     options.max_size);

  Json report;
  report["methods"] = methods;
  report["instances_used"] = observed.total_observations();
  report["instances_skipped"] = skipped;
  report["distinct_posets"] = observed.distinct_count();
  report["ufg_sets"] = result.ufg_set_count;
  report["max_size"] = result.max_size;
  report["truncated"] = result.truncated;
  report["mode"] =
      options.mode == DepthMode::Weighted ? "weighted" : "uniform_count";
  report["normalizer"] = result.normalizer;
  Json candidates = Json::array();
  for (std::size_t c = 0; c < observed.posets.size(); ++c) {
    Json entry;
    entry["poset"] = poset_to_json(observed.posets[c], methods);
    entry["multiplicity"] = observed.multiplicities[c];
    entry["depth"] = result.depths[c];
    entry["supporting_sets"] = result.support[c];
    candidates.push_back(std::move(entry));
  }
  report["candidates"] = std::move(candidates);
  report["deepest"] = result.deepest;
  report["shallowest"] = result.shallowest;
  return report;
}

namespace {

struct ScoredGroups {
  Json groups = Json::array();
  std::map<std::string, double> method_sums;
  std::map<std::string, std::size_t> method_counts;
  std::vector<NormalizedRecord> normalized;  // concatenated, for tuning
  Json bounds_list = Json::array();
};

ScoredGroups normalize_and_score(const TaggedRecords& tagged, const MetricSchema& schema,
                                 const QTextParams* params,
                                 QTextOptions::Normalization norm) {
  ScoredGroups out;
  std::map<std::string, std::vector<std::size_t>> grouping;
  if (norm == QTextOptions::Normalization::Pooled) {
    std::vector<std::size_t> all(tagged.records.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    grouping["pooled"] = std::move(all);
  } else {
    grouping = tagged.by_dataset;
    if (grouping.empty() && !tagged.records.empty()) {
      std::vector<std::size_t> all(tagged.records.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      grouping["all"] = std::move(all);
    }
  }

  for (const auto& [dataset, indices] : grouping) {
    std::vector<MetricRecord> subset;
    subset.reserve(indices.size());
    for (std::size_t idx : indices) subset.push_back(tagged.records[idx]);
    auto [normalized, bounds] = normalize(subset, schema);
    bounds.dataset = dataset;
    bounds.digest = sha256_hex(records_to_csv(subset, schema));

    Json group;
    group["dataset"] = dataset;
    Json b;
    b["dataset"] = bounds.dataset;
    b["digest"] = bounds.digest;
    Json pb;
    pb["min"] = bounds.perplexity.min;
    pb["max"] = bounds.perplexity.max;
    b["perplexity"] = std::move(pb);
    Json cb;
    cb["min"] = bounds.coherence.min;
    cb["max"] = bounds.coherence.max;
    b["coherence"] = std::move(cb);
    Json db;
    db["min"] = bounds.diversity.min;
    db["max"] = bounds.diversity.max;
    b["diversity"] = std::move(db);
    group["bounds"] = b;
    out.bounds_list.push_back(b);

    if (params != nullptr) {
      Json rows = Json::array();
      for (const NormalizedRecord& nr : normalized) {
        double s = score(nr.m, *params);
        Json row;
        row["instance_id"] = nr.instance_id;
        row["method_id"] = nr.method_id;
        row["normalized"] = Json::array({nr.m[0], nr.m[1], nr.m[2]});
        row["score"] = s;
        row["score_x100"] = s * 100.0;
        rows.push_back(std::move(row));
        out.method_sums[nr.method_id] += s;
        out.method_counts[nr.method_id] += 1;
      }
      group["records"] = std::move(rows);
    }
    out.groups.push_back(std::move(group));
    out.normalized.insert(out.normalized.end(), normalized.begin(), normalized.end());
  }
  return out;
}

}  // namespace

Json qtext_score_report(const TaggedRecords& tagged, const MetricSchema& schema,
                        const QTextParams& params, QTextOptions::Normalization norm) {
  params.validate();
  ScoredGroups scored = normalize_and_score(tagged, schema, &params, norm);
  Json report;
  report["params"] = qtext_params_to_json(params);
  report["normalization"] = norm == QTextOptions::Normalization::Pooled
                                ? "pooled"
                                : "per_dataset";
  report["groups"] = std::move(scored.groups);
  Json means;
  for (const auto& [method, sum] : scored.method_sums) {
    means[method] = sum / static_cast<double>(scored.method_counts[method]);
  }
  report["method_means"] = std::move(means);
  return report;
}

Json qtext_tune_report(const TaggedRecords& tagged, const MetricSchema& schema,
                       const Ratings& ratings, const QTextOptions& options,
                       std::uint64_t seed) {
  ScoredGroups scored =
      normalize_and_score(tagged, schema, nullptr, options.normalization);
  TuneConfig tc = options.tune_config;
  tc.rng_seed = seed;
  TuneResult result = tune(scored.normalized, ratings, tc);

  Json report;
  report["tuned_params"] = qtext_params_to_json(result.params);
  report["rho"] = result.rho;
  report["best_restart"] = result.best_restart;
  report["trials"] = tc.max_trials;
  report["restarts"] = tc.restarts;
  report["perturbation_scale"] = tc.perturbation_scale;
  report["seed"] = tc.rng_seed;
  report["normalization_bounds"] = scored.bounds_list;
  Json trace = Json::array();
  for (const TuneTrial& t : result.trace) {
    Json entry;
    entry["restart"] = t.restart;
    entry["trial"] = t.trial;
    entry["proposal_rho"] = t.proposal_rho;
    entry["incumbent_rho"] = t.incumbent_rho;
    entry["accepted"] = t.accepted;
    trace.push_back(std::move(entry));
  }
  report["trace"] = std::move(trace);
  return report;
}

AgreementReport agreement(const WorthTable& worths,
                          const std::map<std::string, double>& qtext_means) {
  std::vector<std::string> shared;
  for (const std::string& method : worths.methods) {
    if (qtext_means.count(method) > 0) shared.push_back(method);
  }
  if (shared.empty()) {
    throw Error(ErrorCode::NoSharedMethods,
                "the worth table and the composite scores share no methods");
  }

  auto ranks_by = [&](auto value_of) {
    std::vector<std::string> order = shared;
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
      double va = value_of(a), vb = value_of(b);
      if (va != vb) return va > vb;
      return a < b;
    });
    std::map<std::string, std::size_t> rank;
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i + 1;
    return rank;
  };
  auto worth_rank = ranks_by([&](const std::string& m) { return worths.worth_of(m); });
  auto qtext_rank = ranks_by([&](const std::string& m) { return qtext_means.at(m); });

  AgreementReport report;
  report.methods = shared;
  for (const std::string& method : shared) {
    report.rank_worth.push_back(worth_rank[method]);
    report.rank_qtext.push_back(qtext_rank[method]);
    report.discrepancy.push_back(static_cast<long>(worth_rank[method]) -
                                 static_cast<long>(qtext_rank[method]));
  }
  for (std::size_t k = 1; k <= shared.size(); ++k) {
    std::size_t overlap = 0;
    for (std::size_t i = 0; i < shared.size(); ++i) {
      if (report.rank_worth[i] <= k && report.rank_qtext[i] <= k) ++overlap;
    }
    report.top_k_overlap.push_back(overlap);
  }

  const std::size_t m = shared.size();
  if (m < 2) {
    report.rank_correlation = std::numeric_limits<double>::quiet_NaN();
  } else {
    // Pearson correlation of the two rank vectors; both are permutations of
    // 1..m, so neither is constant.
    double mean = static_cast<double>(m + 1) / 2.0;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double da = static_cast<double>(report.rank_worth[i]) - mean;
      double db = static_cast<double>(report.rank_qtext[i]) - mean;
      cov += da * db;
      va += da * da;
      vb += db * db;
    }
    report.rank_correlation = cov / std::sqrt(va * vb);
  }
  return report;
}

Json agreement_to_json(const AgreementReport& report) {
  Json j;
  Json rows = Json::array();
  for (std::size_t i = 0; i < report.methods.size(); ++i) {
    Json row;
    row["method"] = report.methods[i];
    row["rank_worth"] = report.rank_worth[i];
    row["rank_qtext"] = report.rank_qtext[i];
    row["discrepancy"] = report.discrepancy[i];
    rows.push_back(std::move(row));
  }
  j["methods"] = std::move(rows);
  j["top_k_overlap"] = report.top_k_overlap;
  if (std::isnan(report.rank_correlation)) {
    j["rank_correlation"] = nullptr;
  } else {
    j["rank_correlation"] = report.rank_correlation;
  }
  return j;
}

namespace {

std::string pad(const std::string& text, std::size_t width) {
  std::string out = text;
  while (out.size() < width) out.push_back(' ');
  return out;
}

std::string render_rows(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      line += pad(row[c], widths[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  }
  return out;
}

std::string fixed6(double v) { return format_fixed(v, 6); }

}  // namespace

std::string render_table(const std::string& kind, const Json& report) {
  std::vector<std::vector<std::string>> rows;
  if (kind == "bt") {
    rows.push_back({"rank", "method", "worth"});
    std::size_t rank = 1;
    for (const Json& method : report.at("ranking")) {
      std::string name = method.get<std::string>();
      rows.push_back({std::to_string(rank++), name,
                      fixed6(report.at("worths").at(name).get<double>())});
    }
    std::string out = render_rows(rows);
    out += "nu = " + format_double(report.at("nu").get<double>()) +
           ", loglik = " + format_double(report.at("loglik").get<double>()) +
           ", converged = " + (report.at("converged").get<bool>() ? "yes" : "no") + "\n";
    return out;
  }
  if (kind == "dominance") {
    rows.push_back({"method_i", "method_j", "wins_i", "wins_j", "ties"});
    for (const Json& pair : report.at("pairs")) {
      rows.push_back({pair.at("method_i").get<std::string>(),
                      pair.at("method_j").get<std::string>(),
                      std::to_string(pair.at("wins_i").get<std::size_t>()),
                      std::to_string(pair.at("wins_j").get<std::size_t>()),
                      std::to_string(pair.at("ties").get<std::size_t>())});
    }
    std::string out = render_rows(rows);
    out += "instances = " + std::to_string(report.at("instances").get<std::size_t>()) +
           ", ordered comparisons = " +
           std::to_string(report.at("comparisons").at("ordered").get<std::size_t>()) + "\n";
    return out;
  }
  if (kind == "ufg") {
    rows.push_back({"candidate", "multiplicity", "supporting", "depth", "strict_pairs"});
    std::size_t index = 0;
    for (const Json& cand : report.at("candidates")) {
      std::string pairs;
      for (const Json& pair : cand.at("poset").at("strict_pairs")) {
        if (!pairs.empty()) pairs += ",";
        pairs += pair[0].get<std::string>() + "<" + pair[1].get<std::string>();
      }
      if (pairs.empty()) pairs = "(none)";
      rows.push_back({std::to_string(index++),
                      std::to_string(cand.at("multiplicity").get<std::size_t>()),
                      std::to_string(cand.at("supporting_sets").get<std::size_t>()),
                      fixed6(cand.at("depth").get<double>()), pairs});
    }
    std::string out = render_rows(rows);
    out += "ufg sets = " + std::to_string(report.at("ufg_sets").get<std::size_t>()) +
           ", deepest = " + std::to_string(report.at("deepest").get<std::size_t>()) +
           ", shallowest = " +
           std::to_string(report.at("shallowest").get<std::size_t>()) + "\n";
    return out;
  }
  if (kind == "qtext") {
    rows.push_back({"method", "mean_score", "mean_score_x100"});
    for (const auto& [method, mean] : report.at("method_means").items()) {
      double v = mean.get<double>();
      rows.push_back({method, fixed6(v), format_fixed(v * 100.0, 2)});
    }
    return render_rows(rows);
  }
  if (kind == "tune") {
    const Json& p = report.at("tuned_params").at("qtext_params");
    rows.push_back({"parameter", "perplexity", "coherence", "diversity"});
    for (const char* key : {"weights", "targets", "penalties"}) {
      rows.push_back({key, format_double(p.at(key).at("perplexity").get<double>()),
                      format_double(p.at(key).at("coherence").get<double>()),
                      format_double(p.at(key).at("diversity").get<double>())});
    }
    std::string out = render_rows(rows);
    out += "rho = " + format_double(report.at("rho").get<double>()) + "\n";
    return out;
  }
  if (kind == "agreement") {
    rows.push_back({"method", "rank_worth", "rank_qtext", "discrepancy"});
    for (const Json& row : report.at("methods")) {
      rows.push_back({row.at("method").get<std::string>(),
                      std::to_string(row.at("rank_worth").get<std::size_t>()),
                      std::to_string(row.at("rank_qtext").get<std::size_t>()),
                      std::to_string(row.at("discrepancy").get<long>())});
    }
    std::string out = render_rows(rows);
    const Json& rho = report.at("rank_correlation");
    out += "rank correlation = " +
           (rho.is_null() ? std::string("undefined") : format_double(rho.get<double>())) +
           "\n";
    return out;
  }
  return serialize_doc(report);
}

RunResult run(const RunConfig& cfg) {
  TaggedRecords tagged = load_inputs(cfg);
  std::vector<std::string> engines = cfg.engines;
  if (engines.empty()) engines = {"davidson", "ufg", "qtext"};
  auto enabled = [&](const char* name) {
    return std::find(engines.begin(), engines.end(), name) != engines.end();
  };

  RunResult result;
  auto tagged_run = [&](const char* engine, auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      throw Error(e.code(), std::string(engine) + ": " + e.detail());
    }
  };

  tagged_run("dominance", [&] {
    result.reports["dominance"] = dominance_report(tagged.records, cfg.schema);
  });

  if (enabled("davidson")) {
    tagged_run("davidson", [&] {
      result.reports["bt"] = bt_report(tagged.records, cfg.schema, cfg.davidson);
    });
  }
  if (enabled("ufg")) {
    tagged_run("ufg", [&] {
      Json report = ufg_report(tagged.records, cfg.schema, cfg.ufg);
      result.truncated = result.truncated || report.at("truncated").get<bool>();
      result.reports["ufg"] = std::move(report);
    });
  }
  if (enabled("qtext")) {
    tagged_run("qtext", [&] {
      QTextParams params;
      if (cfg.qtext.run_tune) {
        if (cfg.qtext.ratings_path.empty()) {
          throw Error(ErrorCode::ParseError, "tuning needs a ratings file");
        }
        Ratings ratings = load_ratings_csv(read_file(cfg.qtext.ratings_path));
        Json tune_doc =
            qtext_tune_report(tagged, cfg.schema, ratings, cfg.qtext, cfg.seed);
        params = qtext_params_from_json(tune_doc.at("tuned_params"));
        result.reports["qtext_tune"] = std::move(tune_doc);
      } else if (!cfg.qtext.params_path.empty()) {
        Json doc;
        try {
          doc = Json::parse(read_file(cfg.qtext.params_path));
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorCode::ParseError, "params file '" + cfg.qtext.params_path +
                                                 "' is not valid JSON: " + e.what());
        }
        params = qtext_params_from_json(doc);
      } else {
        params = QTextParams::tuned_defaults();
      }
      result.reports["qtext"] =
          qtext_score_report(tagged, cfg.schema, params, cfg.qtext.normalization);
    });
  }
  if (enabled("davidson") && enabled("qtext")) {
    tagged_run("agreement", [&] {
      WorthTable table = worth_table_from_json(result.reports.at("bt"));
      std::map<std::string, double> means;
      for (const auto& [method, mean] :
           result.reports.at("qtext").at("method_means").items()) {
        means[method] = mean.get<double>();
      }
      result.reports["agreement"] = agreement_to_json(agreement(table, means));
    });
  }

  Json manifest;
  manifest["artifact"] = "mcbench";
  manifest["version"] = kVersion;
  manifest["seed"] = cfg.seed;
  manifest["engines"] = engines;
  Json inputs = Json::array();
  for (const InputSpec& spec : cfg.inputs) {
    Json entry;
    entry["path"] = spec.path;
    entry["dataset"] = spec.dataset;
    entry["format"] = format_to_name(spec.format);
    entry["sha256"] = sha256_hex(read_file(spec.path));
    inputs.push_back(std::move(entry));
  }
  manifest["inputs"] = std::move(inputs);
  manifest["records"] = tagged.records.size();
  if (!tagged.providers.empty()) manifest["logprob_providers"] = tagged.providers;
  Json report_digests;
  for (const auto& [name, doc] : result.reports) {
    report_digests[name] = sha256_hex(serialize_doc(doc));
  }
  manifest["reports"] = std::move(report_digests);
  result.manifest = std::move(manifest);
  return result;
}

void write_reports(const RunResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, doc] : result.reports) {
    write_file(out_dir + "/" + name + ".json", serialize_doc(doc));
  }
  write_file(out_dir + "/manifest.json", serialize_doc(result.manifest));
}

}  // namespace mcbench
