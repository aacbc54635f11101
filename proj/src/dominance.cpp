// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include "mcbench/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mcbench/errors.hpp"

namespace mcbench {
namespace {

// -1: a worse, 0: equal (within tolerance), +1: a better, per direction.
int compare_metric(double a, double b, Direction dir, double eps) {
  if (std::fabs(a - b) <= eps) return 0;
  bool a_better = (dir == Direction::HigherIsBetter) ? a > b : a < b;
  return a_better ? 1 : -1;
}

}  // namespace

MetricSchema MetricSchema::standard() {
  MetricSchema schema;
  schema.metrics = {{"coherence", Direction::HigherIsBetter},
                    {"diversity", Direction::HigherIsBetter},
                    {"perplexity", Direction::LowerIsBetter}};
  return schema;
}

int MetricSchema::metric_index(const std::string& name) const {
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    if (metrics[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

DominanceOutcome compare(const MetricRecord& a, const MetricRecord& b,
                         const MetricSchema& schema) {
  if (a.instance_id != b.instance_id) {
    throw Error(ErrorCode::MismatchedInstance,
                "comparing records of instances '" + a.instance_id + "' and '" +
                    b.instance_id + "'");
  }
  if (a.values.size() != schema.metrics.size() || b.values.size() != schema.metrics.size()) {
    throw Error(ErrorCode::MismatchedMetrics,
                "record value count disagrees with the metric schema");
  }
  bool a_strict = false;
  bool b_strict = false;
  for (std::size_t k = 0; k < schema.metrics.size(); ++k) {
    int c = compare_metric(a.values[k], b.values[k], schema.metrics[k].direction,
                           schema.epsilon_equal);
    if (c > 0) a_strict = true;
    if (c < 0) b_strict = true;
  }
  if (a_strict && !b_strict) return DominanceOutcome::IWins;
  if (b_strict && !a_strict) return DominanceOutcome::JWins;
  if (!a_strict && !b_strict) return DominanceOutcome::Indifferent;
  return DominanceOutcome::Incomparable;
}

Poset instance_poset(const std::vector<MetricRecord>& records,
                     const std::vector<std::string>& methods,
                     const MetricSchema& schema) {
  std::vector<const MetricRecord*> by_index(methods.size(), nullptr);
  for (const MetricRecord& rec : records) {
    auto it = std::find(methods.begin(), methods.end(), rec.method_id);
    if (it == methods.end()) {
      throw Error(ErrorCode::UnknownMethod,
                  "method '" + rec.method_id + "' is not in the roster");
    }
    std::size_t idx = static_cast<std::size_t>(it - methods.begin());
    if (by_index[idx] != nullptr) {
      throw Error(ErrorCode::DuplicateRecord,
                  "instance '" + rec.instance_id + "' has two rows for method '" +
                      rec.method_id + "'");
    }
    by_index[idx] = &rec;
  }
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (by_index[i] == nullptr) {
      throw Error(ErrorCode::UnknownMethod,
                  "instance is missing a record for method '" + methods[i] + "'");
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      switch (compare(*by_index[i], *by_index[j], schema)) {
        case DominanceOutcome::IWins: edges.emplace_back(i, j); break;
        case DominanceOutcome::JWins: edges.emplace_back(j, i); break;
        default: break;
      }
    }
  }
  // With exact comparison the pairwise edges are already transitive; with a
  // nonzero tolerance the defensive closure can surface antisymmetry
  // violations, which from_strict_pairs reports as NotAPartialOrder.
  return Poset::from_strict_pairs(methods.size(), edges, /*close_first=*/true);
}

std::map<std::string, std::vector<MetricRecord>> group_by_instance(
    const std::vector<MetricRecord>& records) {
  std::map<std::string, std::vector<MetricRecord>> groups;
  for (const MetricRecord& rec : records) groups[rec.instance_id].push_back(rec);
  return groups;
}

std::vector<std::string> method_roster(const std::vector<MetricRecord>& records) {
  std::set<std::string> names;
  for (const MetricRecord& rec : records) names.insert(rec.method_id);
  return std::vector<std::string>(names.begin(), names.end());
}

std::vector<ComparisonTally> tally(const std::vector<MetricRecord>& records,
                                   const MetricSchema& schema) {
  std::vector<std::string> methods = method_roster(records);
  auto index_of = [&](const std::string& name) {
    return static_cast<std::size_t>(
        std::lower_bound(methods.begin(), methods.end(), name) - methods.begin());
  };

  // counts[i][j]: wins of i over j for i < j; counts[j][i]: ties of pair (i,j).
  std::vector<std::vector<std::size_t>> wins(methods.size(),
                                             std::vector<std::size_t>(methods.size(), 0));
  std::vector<std::vector<std::size_t>> ties(methods.size(),
                                             std::vector<std::size_t>(methods.size(), 0));

  for (const auto& [instance_id, group] : group_by_instance(records)) {
    std::vector<const MetricRecord*> present(methods.size(), nullptr);
    for (const MetricRecord& rec : group) {
      std::size_t idx = index_of(rec.method_id);
      if (present[idx] != nullptr) {
        throw Error(ErrorCode::DuplicateRecord,
                    "instance '" + instance_id + "' has two rows for method '" +
                        rec.method_id + "'");
      }
      present[idx] = &rec;
    }
    for (std::size_t i = 0; i < methods.size(); ++i) {
      if (present[i] == nullptr) continue;
      for (std::size_t j = i + 1; j < methods.size(); ++j) {
        if (present[j] == nullptr) continue;
        switch (compare(*present[i], *present[j], schema)) {
          case DominanceOutcome::IWins: ++wins[i][j]; break;
          case DominanceOutcome::JWins: ++wins[j][i]; break;
          case DominanceOutcome::Indifferent:
          case DominanceOutcome::Incomparable: ++ties[i][j]; break;
        }
      }
    }
  }

  std::vector<ComparisonTally> out;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      ComparisonTally t;
      t.method_i = methods[i];
      t.method_j = methods[j];
      t.wins_i = wins[i][j];
      t.wins_j = wins[j][i];
      t.ties = ties[i][j];
      out.push_back(std::move(t));
    }
  }
  return out;
}

PosetSet observed_posets(const std::vector<MetricRecord>& records,
                         const std::vector<std::string>& methods,
                         const MetricSchema& schema, std::size_t* skipped) {
  PosetSet set;
  set.elements = methods;
  std::size_t skipped_count = 0;
  for (const auto& [instance_id, group] : group_by_instance(records)) {
    std::vector<MetricRecord> filtered;
    for (const MetricRecord& rec : group) {
      if (std::find(methods.begin(), methods.end(), rec.method_id) != methods.end()) {
        filtered.push_back(rec);
      }
    }
    if (filtered.size() != methods.size()) {
      ++skipped_count;
      continue;
    }
    set.add(instance_poset(filtered, methods, schema));
  }
  if (skipped != nullptr) *skipped = skipped_count;
  return set;
}

}  // namespace mcbench
