// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace mcbench {

/// A raw binary relation over elements 0..size-1, stored as one bit row per
/// element (bit j of rows[i] set iff (i, j) is in the relation). Not
/// necessarily a partial order; Poset wraps a validated one.
struct Relation {
  std::size_t size = 0;
  std::vector<std::uint64_t> rows;

  static Relation reflexive(std::size_t size);

  bool contains(std::size_t i, std::size_t j) const {
    return (rows[i] >> j) & 1ULL;
  }
  void add(std::size_t i, std::size_t j) { rows[i] |= 1ULL << j; }
  void remove(std::size_t i, std::size_t j) { rows[i] &= ~(1ULL << j); }

  bool is_reflexive() const;
  bool is_antisymmetric() const;
  bool is_transitive() const;

  /// (i, j) pairs with i != j, in row-major order.
  std::vector<std::pair<std::size_t, std::size_t>> strict_pairs() const;

  /// True iff every pair of this relation is also in other.
  bool subset_of(const Relation& other) const;

  /// In-place transitive closure (Warshall over bit rows).
  void close_transitively();

  bool operator==(const Relation& other) const {
    return size == other.size && rows == other.rows;
  }
};

/// A validated partial order: reflexive, transitive, antisymmetric.
/// Elements are indices 0..size-1; callers keep the name roster separately
/// (see PosetSet). Immutable after construction.
class Poset {
 public:
  Poset() = default;

  /// The reflexive-only order (no strict pairs).
  static Poset trivial(std::size_t size);

  /// Validates the relation; throws NotAPartialOrder naming the violated
  /// axiom otherwise.
  static Poset from_relation(const Relation& rel);

  /// Builds from strict pairs. When close_first is set the strict pairs are
  /// transitively closed before validation (antisymmetry is still checked
  /// and still throws on violation).
  static Poset from_strict_pairs(std::size_t size,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                 bool close_first = false);

  std::size_t size() const { return rel_.size; }
  bool contains(std::size_t i, std::size_t j) const { return rel_.contains(i, j); }
  bool strictly_less(std::size_t i, std::size_t j) const {
    return i != j && rel_.contains(i, j);
  }
  const Relation& relation() const { return rel_; }
  std::vector<std::pair<std::size_t, std::size_t>> strict_pairs() const {
    return rel_.strict_pairs();
  }

  bool subset_of(const Poset& other) const { return rel_.subset_of(other.rel_); }

  /// Row-major bit serialization; equal keys iff equal posets. Defines the
  /// canonical ordering used wherever deterministic enumeration matters.
  std::string canonical_key() const;

  bool operator==(const Poset& other) const { return rel_ == other.rel_; }
  bool operator!=(const Poset& other) const { return !(rel_ == other.rel_); }

 private:
  explicit Poset(Relation rel) : rel_(std::move(rel)) {}
  Relation rel_;
};

/// A multiset of observed posets over one shared element roster, stored as
/// distinct posets with multiplicities.
struct PosetSet {
  std::vector<std::string> elements;
  std::vector<Poset> posets;
  std::vector<std::size_t> multiplicities;

  /// Adds one observation, deduplicating against existing posets.
  /// Throws ElementMismatch when the poset size disagrees with the roster.
  void add(const Poset& poset, std::size_t count = 1);

  std::size_t distinct_count() const { return posets.size(); }
  std::size_t total_observations() const;

  /// Index of an equal poset, or -1.
  int find(const Poset& poset) const;
};

/// Setwise intersection of the members' relations; always a valid poset.
/// Throws ElementMismatch on inconsistent sizes, and requires members
/// nonempty.
Poset intersect(const std::vector<Poset>& members);

/// Setwise union of the members' relations. May violate transitivity or
/// antisymmetry; callers can test with the Relation predicates.
Relation union_relation(const std::vector<Poset>& members);

/// True iff intersect(members) is a subset of q and q is a subset of the raw
/// union relation, i.e. q is in the closure of the member set. Two subset
/// tests; never enumerates.
bool contains_in_closure(const std::vector<Poset>& members, const Poset& q);

/// Full closure enumeration: every poset q with intersection <= q <= union.
/// Searches over subsets of the union's free strict pairs with antisymmetry
/// and partial-transitivity pruning, validating at the leaves. Results are
/// sorted by canonical key. max_results caps the search defensively; the cap
/// throws CapExceeded when hit.
std::vector<Poset> closure(const std::vector<Poset>& members,
                           std::size_t max_results = 1u << 22);

/// Convenience overloads over a whole PosetSet (multiplicities ignored;
/// closure is a function of the distinct members).
Poset intersect(const PosetSet& set);
Relation union_relation(const PosetSet& set);
bool contains_in_closure(const PosetSet& set, const Poset& q);
std::vector<Poset> closure(const PosetSet& set, std::size_t max_results = 1u << 22);

namespace detail {

/// Runs the closure search, invoking visit on every member in DFS order.
/// Stops early when visit returns false; the return value says whether the
/// enumeration ran to completion.
bool for_each_closure_member(const std::vector<Poset>& members,
                             const std::function<bool(const Poset&)>& visit);

}  // namespace detail

}  // namespace mcbench
