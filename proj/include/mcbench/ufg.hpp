// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mcbench/poset.hpp"

namespace mcbench {

/// How depth weights each union-free generic set.
///   Weighted:     product of the members' empirical frequencies (the
///                 displayed depth formula).
///   UniformCount: every set counts 1 (supporting sets / total sets).
/// The two disagree whenever set sizes are mixed; both are first-class.
enum class DepthMode { Weighted, UniformCount };

/// A union-free generic subset of the observed distinct posets, stored as
/// sorted indices into PosetSet::posets.
struct UfgSet {
  std::vector<std::size_t> members;
};

/// enumerate_ufg output. `truncated` is set when max_size was smaller than
/// the number of distinct posets, so larger candidate sets were never tried.
struct UfgEnumeration {
  std::vector<UfgSet> sets;
  std::size_t max_size = 0;
  bool truncated = false;
};

/// Depths of a candidate list under one enumeration.
struct DepthResult {
  std::vector<double> depths;           // aligned with the candidate list
  std::vector<std::size_t> support;     // ufg sets whose closure holds the candidate
  std::size_t ufg_set_count = 0;
  double normalizer = 0.0;              // c_n (UniformCount: 1 / set count)
  std::size_t max_size = 0;
  bool truncated = false;
  std::size_t deepest = 0;              // candidate indices; ties broken by
  std::size_t shallowest = 0;           // canonical poset key
};

/// True iff the distinct posets form a union-free generic set:
///   C1: the closure strictly contains the set;
///   C2: the closure is not the union of the closures of proper subsets.
/// Decided by searching for a witness poset q in the closure that lies in no
/// proper subset's closure (checking the leave-one-out subsets suffices,
/// since the closure operator is increasing). Such a q is outside every
/// singleton closure {p}, hence q is not a member and C1 follows.
/// Requires >= 2 distinct members over one element set; throws
/// ElementMismatch otherwise.
bool is_ufg(const std::vector<Poset>& members);

/// All union-free generic subsets of the distinct observed posets with
/// 2 <= size <= max_size, enumerated deterministically: set size ascending,
/// then lexicographic over member positions in canonical-key order.
UfgEnumeration enumerate_ufg(const PosetSet& observed, std::size_t max_size = 4);

/// Empirical depth of `target` given an enumeration over `observed`.
/// Weighted mode: normalized sum over ufg sets whose closure contains the
/// target of the product of member frequencies. UniformCount: supporting
/// sets / total sets. Returns 0 when no set supports the target; throws
/// NoUfgSets when the enumeration is empty (depth undefined).
double depth(const PosetSet& observed, const UfgEnumeration& enumeration,
             const Poset& target, DepthMode mode = DepthMode::Weighted);

/// Depths for every candidate (default the observed distinct posets), with
/// the deepest and shallowest identified deterministically.
DepthResult rank_by_depth(const PosetSet& observed, const std::vector<Poset>& candidates,
                          DepthMode mode = DepthMode::Weighted, std::size_t max_size = 4);

}  // namespace mcbench
