// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include "mcbench/poset.hpp"

#include <algorithm>

#include "mcbench/errors.hpp"

namespace mcbench {
namespace {

void check_size(std::size_t size) {
  if (size == 0) {
    throw Error(ErrorCode::ElementMismatch, "relation needs at least one element");
  }
  if (size > 64) {
    throw Error(ErrorCode::OutOfRangeInput,
                "at most 64 elements are supported, got " + std::to_string(size));
  }
}

std::uint64_t low_mask(std::size_t size) {
  return size >= 64 ? ~0ULL : ((1ULL << size) - 1);
}

void check_same_size(const std::vector<Poset>& members) {
  if (members.empty()) {
    throw Error(ErrorCode::ElementMismatch, "poset collection is empty");
  }
  for (const Poset& p : members) {
    if (p.size() != members.front().size()) {
      throw Error(ErrorCode::ElementMismatch,
                  "posets range over different element sets (" +
                      std::to_string(p.size()) + " vs " +
                      std::to_string(members.front().size()) + " elements)");
    }
  }
}

}  // namespace

Relation Relation::reflexive(std::size_t size) {
  check_size(size);
  Relation rel;
  rel.size = size;
  rel.rows.resize(size, 0);
  for (std::size_t i = 0; i < size; ++i) rel.rows[i] = 1ULL << i;
  return rel;
}

bool Relation::is_reflexive() const {
  for (std::size_t i = 0; i < size; ++i) {
    if (!contains(i, i)) return false;
  }
  return true;
}

bool Relation::is_antisymmetric() const {
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      if (contains(i, j) && contains(j, i)) return false;
    }
  }
  return true;
}

bool Relation::is_transitive() const {
  for (std::size_t i = 0; i < size; ++i) {
    std::uint64_t reach = rows[i];
    while (reach != 0) {
      std::size_t j = static_cast<std::size_t>(__builtin_ctzll(reach));
      reach &= reach - 1;
      if ((rows[j] & ~rows[i]) != 0) return false;
    }
  }
  return true;
}

std::vector<std::pair<std::size_t, std::size_t>> Relation::strict_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < size; ++i) {
    std::uint64_t bits = rows[i] & ~(1ULL << i);
    while (bits != 0) {
      std::size_t j = static_cast<std::size_t>(__builtin_ctzll(bits));
      bits &= bits - 1;
      pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

bool Relation::subset_of(const Relation& other) const {
  if (size != other.size) {
    throw Error(ErrorCode::ElementMismatch,
                "relations range over different element sets");
  }
  for (std::size_t i = 0; i < size; ++i) {
    if ((rows[i] & ~other.rows[i]) != 0) return false;
  }
  return true;
}

void Relation::close_transitively() {
  for (std::size_t k = 0; k < size; ++k) {
    for (std::size_t i = 0; i < size; ++i) {
      if (contains(i, k)) rows[i] |= rows[k];
    }
  }
}

Poset Poset::trivial(std::size_t size) { return Poset(Relation::reflexive(size)); }

Poset Poset::from_relation(const Relation& rel) {
  check_size(rel.size);
  if (rel.rows.size() != rel.size) {
    throw Error(ErrorCode::ElementMismatch, "relation row count disagrees with size");
  }
  std::uint64_t mask = low_mask(rel.size);
  for (std::uint64_t row : rel.rows) {
    if ((row & ~mask) != 0) {
      throw Error(ErrorCode::ElementMismatch, "relation has bits beyond its element set");
    }
  }
  if (!rel.is_reflexive()) {
    throw Error(ErrorCode::NotAPartialOrder, "relation is not reflexive");
  }
  if (!rel.is_antisymmetric()) {
    throw Error(ErrorCode::NotAPartialOrder, "relation is not antisymmetric");
  }
  if (!rel.is_transitive()) {
    throw Error(ErrorCode::NotAPartialOrder, "relation is not transitive");
  }
  return Poset(rel);
}

Poset Poset::from_strict_pairs(
    std::size_t size, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
    bool close_first) {
  Relation rel = Relation::reflexive(size);
  for (auto [i, j] : pairs) {
    if (i >= size || j >= size) {
      throw Error(ErrorCode::ElementMismatch,
                  "pair (" + std::to_string(i) + "," + std::to_string(j) +
                      ") is outside the element set");
    }
    rel.add(i, j);
  }
  if (close_first) rel.close_transitively();
  return from_relation(rel);
}

std::string Poset::canonical_key() const {
  std::string key;
  key.reserve(rel_.rows.size() * 8);
  for (std::uint64_t row : rel_.rows) {
    for (int shift = 56; shift >= 0; shift -= 8) {
      key.push_back(static_cast<char>((row >> shift) & 0xFF));
    }
  }
  return key;
}

void PosetSet::add(const Poset& poset, std::size_t count) {
  if (!elements.empty() && poset.size() != elements.size()) {
    throw Error(ErrorCode::ElementMismatch,
                "poset has " + std::to_string(poset.size()) + " elements, roster has " +
                    std::to_string(elements.size()));
  }
  if (!posets.empty() && poset.size() != posets.front().size()) {
    throw Error(ErrorCode::ElementMismatch, "poset size disagrees with the set");
  }
  int idx = find(poset);
  if (idx >= 0) {
    multiplicities[static_cast<std::size_t>(idx)] += count;
  } else {
    posets.push_back(poset);
    multiplicities.push_back(count);
  }
}

std::size_t PosetSet::total_observations() const {
  std::size_t total = 0;
  for (std::size_t m : multiplicities) total += m;
  return total;
}

int PosetSet::find(const Poset& poset) const {
  for (std::size_t i = 0; i < posets.size(); ++i) {
    if (posets[i] == poset) return static_cast<int>(i);
  }
  return -1;
}

Poset intersect(const std::vector<Poset>& members) {
  check_same_size(members);
  Relation rel = members.front().relation();
  for (std::size_t k = 1; k < members.size(); ++k) {
    const Relation& other = members[k].relation();
    for (std::size_t i = 0; i < rel.size; ++i) rel.rows[i] &= other.rows[i];
  }
  // Intersection of posets is reflexive, transitive, antisymmetric.
  return Poset::from_relation(rel);
}

Relation union_relation(const std::vector<Poset>& members) {
  check_same_size(members);
  Relation rel = members.front().relation();
  for (std::size_t k = 1; k < members.size(); ++k) {
    const Relation& other = members[k].relation();
    for (std::size_t i = 0; i < rel.size; ++i) rel.rows[i] |= other.rows[i];
  }
  return rel;
}

bool contains_in_closure(const std::vector<Poset>& members, const Poset& q) {
  check_same_size(members);
  if (q.size() != members.front().size()) {
    throw Error(ErrorCode::ElementMismatch,
                "query poset ranges over a different element set");
  }
  const std::size_t m = q.size();
  // Lower bound: every pair present in all members must be in q.
  // Upper bound: every pair of q must be present in some member.
  std::vector<std::uint64_t> floor_rows(m, ~0ULL), ceil_rows(m, 0ULL);
  for (const Poset& p : members) {
    for (std::size_t i = 0; i < m; ++i) {
      floor_rows[i] &= p.relation().rows[i];
      ceil_rows[i] |= p.relation().rows[i];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if ((floor_rows[i] & ~q.relation().rows[i]) != 0) return false;
    if ((q.relation().rows[i] & ~ceil_rows[i]) != 0) return false;
  }
  return true;
}

namespace {

/// Depth-first closure enumeration. The current relation is kept
/// transitively closed at every step, so leaves need no final validity pass.
struct ClosureSearch {
  const Relation* ceiling;
  const std::vector<std::pair<std::size_t, std::size_t>>* free_pairs;
  const std::function<bool(const Poset&)>* visit;

  /// Returns false when the visitor asked to stop.
  bool run(Relation rel, Relation forbidden, std::size_t next) {
    if (next == free_pairs->size()) {
      return (*visit)(Poset::from_relation(rel));
    }
    auto [i, j] = (*free_pairs)[next];
    if (rel.contains(i, j)) {
      // Forced in by an earlier transitive closure step.
      return run(std::move(rel), std::move(forbidden), next + 1);
    }
    // Branch 1: leave the pair out.
    {
      Relation forbidden_more = forbidden;
      forbidden_more.add(i, j);
      if (!run(rel, std::move(forbidden_more), next + 1)) return false;
    }
    // Branch 2: take the pair; close transitively through (i, j) and prune
    // if that escapes the ceiling, breaks antisymmetry, or resurrects an
    // excluded pair.
    Relation grown = rel;
    for (std::size_t a = 0; a < grown.size; ++a) {
      if (grown.contains(a, i)) grown.rows[a] |= rel.rows[j] | (1ULL << j);
    }
    for (std::size_t a = 0; a < grown.size; ++a) {
      std::uint64_t added = grown.rows[a] & ~rel.rows[a];
      if ((added & ~ceiling->rows[a]) != 0) return true;
      if ((added & forbidden.rows[a]) != 0) return true;
      std::uint64_t bits = added;
      while (bits != 0) {
        std::size_t b = static_cast<std::size_t>(__builtin_ctzll(bits));
        bits &= bits - 1;
        if (a != b && grown.contains(b, a)) return true;
      }
    }
    return run(std::move(grown), std::move(forbidden), next + 1);
  }
};

}  // namespace

namespace detail {

bool for_each_closure_member(const std::vector<Poset>& members,
                             const std::function<bool(const Poset&)>& visit) {
  check_same_size(members);
  Poset floor = intersect(members);
  Relation ceiling = union_relation(members);

  std::vector<std::pair<std::size_t, std::size_t>> free_pairs;
  for (auto [i, j] : ceiling.strict_pairs()) {
    if (!floor.contains(i, j)) free_pairs.emplace_back(i, j);
  }

  Relation forbidden;
  forbidden.size = ceiling.size;
  forbidden.rows.assign(ceiling.size, 0);
  ClosureSearch search{&ceiling, &free_pairs, &visit};
  return search.run(floor.relation(), std::move(forbidden), 0);
}

}  // namespace detail

std::vector<Poset> closure(const std::vector<Poset>& members, std::size_t max_results) {
  std::vector<Poset> result;
  detail::for_each_closure_member(members, [&](const Poset& q) {
    if (result.size() >= max_results) {
      throw Error(ErrorCode::CapExceeded,
                  "closure enumeration exceeded " + std::to_string(max_results) +
                      " results");
    }
    result.push_back(q);
    return true;
  });
  std::sort(result.begin(), result.end(), [](const Poset& a, const Poset& b) {
    return a.canonical_key() < b.canonical_key();
  });
  return result;
}

Poset intersect(const PosetSet& set) { return intersect(set.posets); }

Relation union_relation(const PosetSet& set) { return union_relation(set.posets); }

bool contains_in_closure(const PosetSet& set, const Poset& q) {
  return contains_in_closure(set.posets, q);
}

std::vector<Poset> closure(const PosetSet& set, std::size_t max_results) {
  return closure(set.posets, max_results);
}

}  // namespace mcbench
