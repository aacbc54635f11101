// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include "mcbench/serialization.hpp"

#include <algorithm>

#include "mcbench/csv.hpp"
#include "mcbench/errors.hpp"
#include "mcbench/util.hpp"

namespace mcbench {
namespace {

const Json& require(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::ParseError, std::string("missing JSON key '") + key + "'");
  }
  return *it;
}

std::array<double, 3> triple_from_json(const Json& j, const char* key) {
  const Json& obj = require(j, key);
  return {require(obj, "perplexity").get<double>(),
          require(obj, "coherence").get<double>(),
          require(obj, "diversity").get<double>()};
}

Json triple_to_json(const std::array<double, 3>& t) {
  Json obj;
  obj["perplexity"] = t[0];
  obj["coherence"] = t[1];
  obj["diversity"] = t[2];
  return obj;
}

}  // namespace

Json poset_to_json(const Poset& poset, const std::vector<std::string>& elements) {
  if (elements.size() != poset.size()) {
    throw Error(ErrorCode::ElementMismatch,
                "roster size disagrees with the poset element count");
  }
  Json j;
  j["elements"] = elements;
  Json pairs = Json::array();
  for (auto [i, k] : poset.strict_pairs()) {
    pairs.push_back(Json::array({elements[i], elements[k]}));
  }
  j["strict_pairs"] = std::move(pairs);
  return j;
}

Poset poset_from_json(const Json& j, std::vector<std::string>* elements_out) {
  std::vector<std::string> elements =
      require(j, "elements").get<std::vector<std::string>>();
  auto index_of = [&](const std::string& name) {
    auto it = std::find(elements.begin(), elements.end(), name);
    if (it == elements.end()) {
      throw Error(ErrorCode::ElementMismatch,
                  "strict pair names unknown element '" + name + "'");
    }
    return static_cast<std::size_t>(it - elements.begin());
  };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const Json& pair : require(j, "strict_pairs")) {
    if (!pair.is_array() || pair.size() != 2) {
      throw Error(ErrorCode::ParseError, "strict pair is not a two-element array");
    }
    pairs.emplace_back(index_of(pair[0].get<std::string>()),
                       index_of(pair[1].get<std::string>()));
  }
  if (elements_out != nullptr) *elements_out = elements;
  return Poset::from_strict_pairs(elements.size(), pairs);
}

Json worth_table_to_json(const WorthTable& table) {
  Json j;
  Json worths;
  for (std::size_t i = 0; i < table.methods.size(); ++i) {
    worths[table.methods[i]] = table.worths[i];
  }
  j["worths"] = std::move(worths);
  j["nu"] = table.nu;
  j["loglik"] = table.loglik;
  j["iterations"] = table.iterations;
  j["converged"] = table.converged;
  j["ranking"] = table.ranking;
  return j;
}

WorthTable worth_table_from_json(const Json& j) {
  WorthTable table;
  for (const auto& [method, worth] : require(j, "worths").items()) {
    table.methods.push_back(method);
    table.worths.push_back(worth.get<double>());
  }
  // nlohmann::ordered_json preserves insertion order; re-sort to the
  // canonical method order and keep worths aligned.
  std::vector<std::size_t> order(table.methods.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return table.methods[a] < table.methods[b];
  });
  std::vector<std::string> methods;
  std::vector<double> worths;
  for (std::size_t idx : order) {
    methods.push_back(table.methods[idx]);
    worths.push_back(table.worths[idx]);
  }
  table.methods = std::move(methods);
  table.worths = std::move(worths);
  table.nu = require(j, "nu").get<double>();
  table.loglik = require(j, "loglik").get<double>();
  table.iterations = require(j, "iterations").get<std::size_t>();
  table.converged = require(j, "converged").get<bool>();
  table.ranking = require(j, "ranking").get<std::vector<std::string>>();
  return table;
}

Json qtext_params_to_json(const QTextParams& params, const NormalizationBounds* bounds) {
  Json j;
  Json p;
  p["weights"] = triple_to_json(params.weights);
  p["targets"] = triple_to_json(params.targets);
  p["penalties"] = triple_to_json(params.penalties);
  j["qtext_params"] = std::move(p);
  if (bounds != nullptr) {
    Json b;
    b["dataset"] = bounds->dataset;
    b["digest"] = bounds->digest;
    Json pb;
    pb["min"] = bounds->perplexity.min;
    pb["max"] = bounds->perplexity.max;
    b["perplexity"] = std::move(pb);
    Json cb;
    cb["min"] = bounds->coherence.min;
    cb["max"] = bounds->coherence.max;
    b["coherence"] = std::move(cb);
    Json db;
    db["min"] = bounds->diversity.min;
    db["max"] = bounds->diversity.max;
    b["diversity"] = std::move(db);
    j["normalization_bounds"] = std::move(b);
  }
  return j;
}

QTextParams qtext_params_from_json(const Json& j, NormalizationBounds* bounds_out) {
  const Json& p = require(j, "qtext_params");
  QTextParams params;
  params.weights = triple_from_json(p, "weights");
  params.targets = triple_from_json(p, "targets");
  params.penalties = triple_from_json(p, "penalties");
  params.validate();
  if (bounds_out != nullptr) {
    auto it = j.find("normalization_bounds");
    if (it != j.end()) {
      const Json& b = *it;
      bounds_out->dataset = require(b, "dataset").get<std::string>();
      bounds_out->digest = require(b, "digest").get<std::string>();
      auto read = [&](const char* key) {
        const Json& mb = require(b, key);
        return MetricBounds{require(mb, "min").get<double>(),
                            require(mb, "max").get<double>()};
      };
      bounds_out->perplexity = read("perplexity");
      bounds_out->coherence = read("coherence");
      bounds_out->diversity = read("diversity");
    }
  }
  return params;
}

Json tallies_to_json(const std::vector<ComparisonTally>& tallies) {
  Json arr = Json::array();
  for (const ComparisonTally& t : tallies) {
    Json j;
    j["method_i"] = t.method_i;
    j["method_j"] = t.method_j;
    j["wins_i"] = t.wins_i;
    j["wins_j"] = t.wins_j;
    j["ties"] = t.ties;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<ComparisonTally> tallies_from_json(const Json& j) {
  std::vector<ComparisonTally> tallies;
  for (const Json& item : j) {
    ComparisonTally t;
    t.method_i = require(item, "method_i").get<std::string>();
    t.method_j = require(item, "method_j").get<std::string>();
    t.wins_i = require(item, "wins_i").get<std::size_t>();
    t.wins_j = require(item, "wins_j").get<std::size_t>();
    t.ties = require(item, "ties").get<std::size_t>();
    tallies.push_back(std::move(t));
  }
  return tallies;
}

std::string records_to_csv(const std::vector<MetricRecord>& records,
                           const MetricSchema& schema) {
  std::string out = "instance_id,method_id";
  for (const MetricDirection& md : schema.metrics) {
    out += ',';
    out += csv_escape(md.name);
  }
  out += '\n';
  for (const MetricRecord& rec : records) {
    out += csv_escape(rec.instance_id);
    out += ',';
    out += csv_escape(rec.method_id);
    for (double v : rec.values) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace mcbench
