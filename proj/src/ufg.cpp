// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include "mcbench/ufg.hpp"

#include <algorithm>
#include <numeric>

#include "mcbench/errors.hpp"

namespace mcbench {
namespace {

struct Bounds {
  Relation floor;
  Relation ceiling;

  bool holds(const Poset& q) const {
    for (std::size_t i = 0; i < floor.size; ++i) {
      if ((floor.rows[i] & ~q.relation().rows[i]) != 0) return false;
      if ((q.relation().rows[i] & ~ceiling.rows[i]) != 0) return false;
    }
    return true;
  }
};

Bounds bounds_of(const std::vector<Poset>& members) {
  return Bounds{intersect(members).relation(), union_relation(members)};
}

}  // namespace

bool is_ufg(const std::vector<Poset>& members) {
  if (members.size() < 2) {
    throw Error(ErrorCode::ElementMismatch,
                "a union-free generic set needs at least 2 members");
  }
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      if (members[a] == members[b]) {
        throw Error(ErrorCode::ElementMismatch, "members must be distinct posets");
      }
    }
  }

  // The closure operator is increasing, so a poset escaping every
  // leave-one-out closure escapes every proper subset's closure. A witness
  // is also outside each singleton closure {p}, hence not a member, which
  // gives strict containment of the member set in its closure.
  std::vector<Bounds> leave_one_out;
  leave_one_out.reserve(members.size());
  std::vector<Poset> rest;
  rest.reserve(members.size() - 1);
  for (std::size_t k = 0; k < members.size(); ++k) {
    rest.clear();
    for (std::size_t a = 0; a < members.size(); ++a) {
      if (a != k) rest.push_back(members[a]);
    }
    leave_one_out.push_back(bounds_of(rest));
  }

  bool found_witness = false;
  detail::for_each_closure_member(members, [&](const Poset& q) {
    for (const Bounds& b : leave_one_out) {
      if (b.holds(q)) return true;  // keep searching
    }
    found_witness = true;
    return false;
  });
  return found_witness;
}

UfgEnumeration enumerate_ufg(const PosetSet& observed, std::size_t max_size) {
  if (observed.posets.empty()) {
    throw Error(ErrorCode::ElementMismatch, "observed poset set is empty");
  }
  if (max_size < 2) {
    throw Error(ErrorCode::OutOfRangeInput, "max_size must be at least 2");
  }
  const std::size_t n = observed.posets.size();

  // Canonical-key order makes the enumeration independent of observation
  // order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return observed.posets[a].canonical_key() < observed.posets[b].canonical_key();
  });

  UfgEnumeration result;
  result.max_size = max_size;
  result.truncated = max_size < n;

  std::vector<std::size_t> combo;
  std::vector<Poset> members;
  // Lexicographic enumeration of size-s position combinations.
  for (std::size_t s = 2; s <= std::min(max_size, n); ++s) {
    combo.resize(s);
    std::iota(combo.begin(), combo.end(), 0);
    while (true) {
      members.clear();
      for (std::size_t pos : combo) members.push_back(observed.posets[order[pos]]);
      if (is_ufg(members)) {
        UfgSet set;
        for (std::size_t pos : combo) set.members.push_back(order[pos]);
        std::sort(set.members.begin(), set.members.end());
        result.sets.push_back(std::move(set));
      }
      // Advance to the next combination.
      std::size_t k = s;
      while (k > 0 && combo[k - 1] == n - s + k - 1) --k;
      if (k == 0) break;
      ++combo[k - 1];
      for (std::size_t t = k; t < s; ++t) combo[t] = combo[t - 1] + 1;
    }
  }
  return result;
}

double depth(const PosetSet& observed, const UfgEnumeration& enumeration,
             const Poset& target, DepthMode mode) {
  if (enumeration.sets.empty()) {
    throw Error(ErrorCode::NoUfgSets,
                "no union-free generic sets; depth is undefined");
  }
  const double total_obs = static_cast<double>(observed.total_observations());

  double total_weight = 0.0;
  double supported_weight = 0.0;
  std::vector<Poset> members;
  for (const UfgSet& set : enumeration.sets) {
    double weight = 1.0;
    if (mode == DepthMode::Weighted) {
      for (std::size_t idx : set.members) {
        weight *= static_cast<double>(observed.multiplicities[idx]) / total_obs;
      }
    }
    total_weight += weight;
    members.clear();
    for (std::size_t idx : set.members) members.push_back(observed.posets[idx]);
    if (contains_in_closure(members, target)) supported_weight += weight;
  }
  if (total_weight == 0.0) return 0.0;
  return supported_weight / total_weight;
}

DepthResult rank_by_depth(const PosetSet& observed, const std::vector<Poset>& candidates,
                          DepthMode mode, std::size_t max_size) {
  if (candidates.empty()) {
    throw Error(ErrorCode::ElementMismatch, "candidate list is empty");
  }
  UfgEnumeration enumeration = enumerate_ufg(observed, max_size);

  DepthResult result;
  result.ufg_set_count = enumeration.sets.size();
  result.max_size = enumeration.max_size;
  result.truncated = enumeration.truncated;

  // Shared normalizer across candidates.
  const double total_obs = static_cast<double>(observed.total_observations());
  double total_weight = 0.0;
  std::vector<double> weights;
  weights.reserve(enumeration.sets.size());
  for (const UfgSet& set : enumeration.sets) {
    double weight = 1.0;
    if (mode == DepthMode::Weighted) {
      for (std::size_t idx : set.members) {
        weight *= static_cast<double>(observed.multiplicities[idx]) / total_obs;
      }
    }
    weights.push_back(weight);
    total_weight += weight;
  }
  if (enumeration.sets.empty()) {
    throw Error(ErrorCode::NoUfgSets,
                "no union-free generic sets; depth is undefined");
  }
  result.normalizer = total_weight > 0.0 ? 1.0 / total_weight : 0.0;

  result.depths.resize(candidates.size(), 0.0);
  result.support.resize(candidates.size(), 0);
  std::vector<Poset> members;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double supported = 0.0;
    std::size_t support_count = 0;
    for (std::size_t s = 0; s < enumeration.sets.size(); ++s) {
      members.clear();
      for (std::size_t idx : enumeration.sets[s].members) {
        members.push_back(observed.posets[idx]);
      }
      if (contains_in_closure(members, candidates[c])) {
        supported += weights[s];
        ++support_count;
      }
    }
    result.depths[c] = total_weight > 0.0 ? supported / total_weight : 0.0;
    result.support[c] = support_count;
  }

  auto better = [&](std::size_t a, std::size_t b, bool want_max) {
    if (result.depths[a] != result.depths[b]) {
      return want_max ? result.depths[a] > result.depths[b]
                      : result.depths[a] < result.depths[b];
    }
    return candidates[a].canonical_key() < candidates[b].canonical_key();
  };
  result.deepest = 0;
  result.shallowest = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    if (better(c, result.deepest, true)) result.deepest = c;
    if (better(c, result.shallowest, false)) result.shallowest = c;
  }
  return result;
}

}  // namespace mcbench
