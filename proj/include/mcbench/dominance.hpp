// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#pragma once

#include <map>
#include <string>
#include <vector>

#include "mcbench/poset.hpp"

namespace mcbench {

enum class Direction { HigherIsBetter, LowerIsBetter };

/// One metric plus the sense in which it is compared. Perplexity defaults to
/// LowerIsBetter; coherence and diversity to HigherIsBetter.
struct MetricDirection {
  std::string name;
  Direction direction = Direction::HigherIsBetter;
};

/// The configured metric columns, in a fixed order, plus the equality
/// tolerance used when comparing two values of the same metric.
/// epsilon_equal = 0 means exact comparison.
struct MetricSchema {
  std::vector<MetricDirection> metrics;
  double epsilon_equal = 0.0;

  static MetricSchema standard();

  int metric_index(const std::string& name) const;
};

/// One (instance, method) row: the metric values in schema order.
struct MetricRecord {
  std::string instance_id;
  std::string method_id;
  std::vector<double> values;
};

enum class DominanceOutcome { IWins, JWins, Indifferent, Incomparable };

/// Aggregated pairwise counts for one unordered method pair (i before j in
/// canonical method order). Indifferent and Incomparable instances both
/// count as ties.
struct ComparisonTally {
  std::string method_i;
  std::string method_j;
  std::size_t wins_i = 0;
  std::size_t wins_j = 0;
  std::size_t ties = 0;

  std::size_t total() const { return wins_i + wins_j + ties; }
};

/// Pairwise dominance on one instance: IWins iff `a` is weakly better on
/// every metric (per its direction) and strictly better on at least one;
/// Indifferent iff equal everywhere; Incomparable otherwise. Depends only on
/// per-metric order, so it is invariant under strictly monotone rescalings.
/// Throws MismatchedInstance / MismatchedMetrics on inconsistent inputs.
DominanceOutcome compare(const MetricRecord& a, const MetricRecord& b,
                         const MetricSchema& schema);

/// The partial order induced on one instance's methods: a strict edge for
/// every IWins pair, transitively closed defensively (a no-op with exact
/// comparison), then validated. `methods` fixes the element indexing.
/// Throws NotAPartialOrder when a nonzero tolerance produces an inconsistent
/// relation, and DuplicateRecord / UnknownMethod on bad inputs.
Poset instance_poset(const std::vector<MetricRecord>& records,
                     const std::vector<std::string>& methods,
                     const MetricSchema& schema);

/// Per-pair win/tie counts across instances. Pairs are counted only on
/// instances where both methods have a record. Output is sorted by
/// (method_i, method_j); methods are ordered lexicographically.
/// Throws DuplicateRecord when an instance has two rows for one method.
std::vector<ComparisonTally> tally(const std::vector<MetricRecord>& records,
                                   const MetricSchema& schema);

/// Groups records by instance id, ordered by instance id.
std::map<std::string, std::vector<MetricRecord>> group_by_instance(
    const std::vector<MetricRecord>& records);

/// Sorted distinct method ids.
std::vector<std::string> method_roster(const std::vector<MetricRecord>& records);

/// Builds the observed multiset of per-instance posets over the given roster.
/// Instances missing any roster method are skipped (a poset over a partial
/// method set is not comparable with the others); the number skipped is
/// reported through `skipped` when non-null.
PosetSet observed_posets(const std::vector<MetricRecord>& records,
                         const std::vector<std::string>& methods,
                         const MetricSchema& schema,
                         std::size_t* skipped = nullptr);

}  // namespace mcbench
