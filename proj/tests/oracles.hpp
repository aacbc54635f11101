// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

// Independent reference implementations the tests check the library against.
// Everything here favors obviousness over speed: brute-force enumeration,
// naive counting, direct formula evaluation. None of it shares code with the
// library beyond the public types.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mcbench/dominance.hpp"
#include "mcbench/poset.hpp"
#include "mcbench/qtext.hpp"
#include "mcbench/rng.hpp"
#include "mcbench/ufg.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// metrics

/// Distinct/total n-gram ratio product via an explicit map of token vectors.
inline double ngram_diversity(const std::vector<std::string>& tokens) {
  double product = 1.0;
  for (std::size_t n = 2; n <= 4; ++n) {
    std::map<std::vector<std::string>, int> counts;
    std::size_t total = 0;
    for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
      std::vector<std::string> gram(tokens.begin() + static_cast<long>(start),
                                    tokens.begin() + static_cast<long>(start + n));
      counts[gram] += 1;
      ++total;
    }
    product *= static_cast<double>(counts.size()) / static_cast<double>(total);
  }
  return product;
}

// ---------------------------------------------------------------------------
// posets and closure

/// Strict pairs of a poset as a set, for order-free comparison.
inline std::set<std::pair<std::size_t, std::size_t>> strict_set(const mcbench::Poset& p) {
  auto pairs = p.strict_pairs();
  return {pairs.begin(), pairs.end()};
}

/// Closure by exhaustive enumeration: every subset of the union's free
/// strict pairs, added on top of the intersection and kept iff the result is
/// a valid poset. No pruning, no sharing with the library's search.
inline std::vector<mcbench::Poset> closure_brute(const std::vector<mcbench::Poset>& members) {
  const std::size_t m = members.front().size();
  mcbench::Poset floor = mcbench::intersect(members);
  mcbench::Relation ceiling = mcbench::union_relation(members);

  std::vector<std::pair<std::size_t, std::size_t>> free_pairs;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && ceiling.contains(i, j) && !floor.contains(i, j)) {
        free_pairs.emplace_back(i, j);
      }
    }
  }

  std::vector<mcbench::Poset> result;
  const std::uint64_t masks = 1ULL << free_pairs.size();
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    mcbench::Relation rel = floor.relation();
    for (std::size_t b = 0; b < free_pairs.size(); ++b) {
      if ((mask >> b) & 1ULL) rel.add(free_pairs[b].first, free_pairs[b].second);
    }
    if (rel.is_transitive() && rel.is_antisymmetric()) {
      result.push_back(mcbench::Poset::from_relation(rel));
    }
  }
  std::sort(result.begin(), result.end(),
            [](const mcbench::Poset& a, const mcbench::Poset& b) {
              return a.canonical_key() < b.canonical_key();
            });
  return result;
}

inline bool closure_contains_brute(const std::vector<mcbench::Poset>& members,
                                   const mcbench::Poset& q) {
  for (const mcbench::Poset& member : closure_brute(members)) {
    if (member == q) return true;
  }
  return false;
}

/// Union-free generic test straight from the two conditions: C1 compares the
/// closure's size against the member count; C2 unions the closures of every
/// proper nonempty subset and compares with the full closure.
inline bool is_ufg_brute(const std::vector<mcbench::Poset>& members) {
  auto keys_of = [](const std::vector<mcbench::Poset>& posets) {
    std::set<std::string> keys;
    for (const mcbench::Poset& p : posets) keys.insert(p.canonical_key());
    return keys;
  };

  std::set<std::string> gamma = keys_of(closure_brute(members));
  if (gamma.size() <= members.size()) return false;  // C1 fails

  std::set<std::string> covered;
  const std::uint64_t subsets = 1ULL << members.size();
  for (std::uint64_t mask = 1; mask + 1 < subsets; ++mask) {
    std::vector<mcbench::Poset> subset;
    for (std::size_t b = 0; b < members.size(); ++b) {
      if ((mask >> b) & 1ULL) subset.push_back(members[b]);
    }
    for (const std::string& key : keys_of(closure_brute(subset))) covered.insert(key);
  }
  return covered != gamma;  // C2: proper subsets must not cover the closure
}

/// Depth by direct summation over brute-enumerated ufg sets.
inline double depth_brute(const mcbench::PosetSet& observed, const mcbench::Poset& target,
                          mcbench::DepthMode mode, std::size_t max_size) {
  const std::size_t k = observed.posets.size();
  const double total = static_cast<double>(observed.total_observations());

  double normalizer = 0.0;
  double supported = 0.0;
  std::size_t set_count = 0;
  std::size_t supporting = 0;
  for (std::uint64_t mask = 1; mask < (1ULL << k); ++mask) {
    std::vector<mcbench::Poset> subset;
    double weight = 1.0;
    for (std::size_t b = 0; b < k; ++b) {
      if ((mask >> b) & 1ULL) {
        subset.push_back(observed.posets[b]);
        weight *= static_cast<double>(observed.multiplicities[b]) / total;
      }
    }
    if (subset.size() < 2 || subset.size() > max_size) continue;
    if (!is_ufg_brute(subset)) continue;
    ++set_count;
    normalizer += weight;
    if (closure_contains_brute(subset, target)) {
      ++supporting;
      supported += weight;
    }
  }
  if (set_count == 0) return -1.0;  // caller decides; library throws NoUfgSets
  if (mode == mcbench::DepthMode::UniformCount) {
    return static_cast<double>(supporting) / static_cast<double>(set_count);
  }
  return supported / normalizer;
}

/// A random poset: a handful of random strict pairs, transitively closed,
/// resampled until antisymmetric.
inline mcbench::Poset random_poset(std::size_t m, std::size_t max_edges, mcbench::Rng& rng) {
  for (;;) {
    mcbench::Relation rel = mcbench::Relation::reflexive(m);
    std::size_t edges = rng.below(max_edges + 1);
    for (std::size_t e = 0; e < edges; ++e) {
      std::size_t i = rng.below(m);
      std::size_t j = rng.below(m);
      if (i != j) rel.add(i, j);
    }
    rel.close_transitively();
    if (rel.is_antisymmetric()) return mcbench::Poset::from_relation(rel);
  }
}

// ---------------------------------------------------------------------------
// dominance

/// Pairwise dominance decided by counting strictly-better metrics per side.
inline mcbench::DominanceOutcome compare_brute(const mcbench::MetricRecord& a,
                                               const mcbench::MetricRecord& b,
                                               const mcbench::MetricSchema& schema) {
  std::size_t a_better = 0, b_better = 0, equal = 0;
  for (std::size_t k = 0; k < schema.metrics.size(); ++k) {
    double x = a.values[k];
    double y = b.values[k];
    if (schema.metrics[k].direction == mcbench::Direction::LowerIsBetter) {
      x = -x;
      y = -y;
    }
    if (std::abs(a.values[k] - b.values[k]) <= schema.epsilon_equal) {
      ++equal;
    } else if (x > y) {
      ++a_better;
    } else {
      ++b_better;
    }
  }
  if (equal == schema.metrics.size()) return mcbench::DominanceOutcome::Indifferent;
  if (b_better == 0 && a_better > 0) return mcbench::DominanceOutcome::IWins;
  if (a_better == 0 && b_better > 0) return mcbench::DominanceOutcome::JWins;
  return mcbench::DominanceOutcome::Incomparable;
}

/// Strict order on one instance: IWins edges, Floyd-Warshall closure.
/// Returns the strict pair set (indices into `methods`).
inline std::set<std::pair<std::size_t, std::size_t>> instance_order_brute(
    const std::vector<mcbench::MetricRecord>& records,
    const std::vector<std::string>& methods, const mcbench::MetricSchema& schema) {
  const std::size_t m = methods.size();
  auto record_of = [&](std::size_t idx) -> const mcbench::MetricRecord* {
    for (const mcbench::MetricRecord& r : records) {
      if (r.method_id == methods[idx]) return &r;
    }
    return nullptr;
  };
  std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const auto* a = record_of(i);
      const auto* b = record_of(j);
      if (a != nullptr && b != nullptr &&
          compare_brute(*a, *b, schema) == mcbench::DominanceOutcome::IWins) {
        adj[i][j] = true;
      }
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (adj[i][k] && adj[k][j]) adj[i][j] = true;
      }
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (adj[i][j]) pairs.emplace(i, j);
    }
  }
  return pairs;
}

/// Per-pair tallies by direct nested-map counting.
inline std::map<std::pair<std::string, std::string>, std::array<std::size_t, 3>>
tally_brute(const std::vector<mcbench::MetricRecord>& records,
            const mcbench::MetricSchema& schema) {
  std::map<std::string, std::map<std::string, mcbench::MetricRecord>> by_instance;
  for (const mcbench::MetricRecord& r : records) {
    by_instance[r.instance_id][r.method_id] = r;
  }
  std::map<std::pair<std::string, std::string>, std::array<std::size_t, 3>> out;
  for (const auto& [instance, rows] : by_instance) {
    (void)instance;
    for (auto it = rows.begin(); it != rows.end(); ++it) {
      for (auto jt = std::next(it); jt != rows.end(); ++jt) {
        auto& cell = out[{it->first, jt->first}];
        switch (compare_brute(it->second, jt->second, schema)) {
          case mcbench::DominanceOutcome::IWins: ++cell[0]; break;
          case mcbench::DominanceOutcome::JWins: ++cell[1]; break;
          default: ++cell[2]; break;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// paired-comparison fits

/// Minorization-maximization for plain Bradley-Terry (no ties): the classic
/// fixed-point pi_i <- wins_i / sum_j n_ij / (pi_i + pi_j).
inline std::vector<double> bt_mm(const std::vector<std::vector<double>>& wins,
                                 std::size_t iterations = 20000) {
  const std::size_t m = wins.size();
  std::vector<double> pi(m, 1.0 / static_cast<double>(m));
  for (std::size_t iter = 0; iter < iterations; ++iter) {
    std::vector<double> next(m, 0.0);
    double shift = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double total_wins = 0.0;
      double denom = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        total_wins += wins[i][j];
        double n_ij = wins[i][j] + wins[j][i];
        if (n_ij > 0.0) denom += n_ij / (pi[i] + pi[j]);
      }
      next[i] = denom > 0.0 ? total_wins / denom : pi[i];
    }
    double sum = std::accumulate(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      next[i] /= sum;
      shift = std::max(shift, std::abs(next[i] - pi[i]));
    }
    pi = next;
    if (shift < 1e-14) break;
  }
  return pi;
}

/// Multinomial log-likelihood of one two-method Davidson table.
inline double davidson_two_loglik(double wins_a, double wins_b, double ties, double pi_a,
                                  double nu) {
  double pi_b = 1.0 - pi_a;
  double s = std::sqrt(pi_a * pi_b);
  double d = pi_a + pi_b + nu * s;
  double ll = wins_a * std::log(pi_a / d) + wins_b * std::log(pi_b / d);
  if (ties > 0.0) ll += ties * std::log(nu * s / d);
  return ll;
}

/// Grid argmax of the two-method likelihood over pi_a (nu profiled in closed
/// form per grid point: d ll / d nu = 0 gives nu = ties / (s (wins_a+wins_b))).
inline std::pair<double, double> davidson_two_grid(double wins_a, double wins_b,
                                                   double ties, double step = 1e-4) {
  double best_pi = 0.5, best_nu = 0.0, best_ll = -1e300;
  for (double pi_a = step; pi_a < 1.0 - step / 2; pi_a += step) {
    double s = std::sqrt(pi_a * (1.0 - pi_a));
    double nu = ties > 0.0 ? ties / (s * (wins_a + wins_b)) : 0.0;
    double ll = davidson_two_loglik(wins_a, wins_b, ties, pi_a, nu);
    if (ll > best_ll) {
      best_ll = ll;
      best_pi = pi_a;
      best_nu = nu;
    }
  }
  return {best_pi, best_nu};
}

/// Full-model multinomial log-likelihood at (worths, nu) for stationarity
/// probes via finite differences.
inline double davidson_loglik(const std::vector<mcbench::ComparisonTally>& tallies,
                              const std::map<std::string, double>& worths, double nu) {
  double ll = 0.0;
  for (const mcbench::ComparisonTally& t : tallies) {
    double pi = worths.at(t.method_i);
    double pj = worths.at(t.method_j);
    double s = std::sqrt(pi * pj);
    double d = pi + pj + nu * s;
    if (t.wins_i > 0) ll += static_cast<double>(t.wins_i) * std::log(pi / d);
    if (t.wins_j > 0) ll += static_cast<double>(t.wins_j) * std::log(pj / d);
    if (t.ties > 0) ll += static_cast<double>(t.ties) * std::log(nu * s / d);
  }
  return ll;
}

/// Samples per-pair outcome counts from the Davidson model probabilities:
/// every pair is compared once per instance.
inline std::vector<mcbench::ComparisonTally> sample_davidson(
    const std::vector<std::string>& methods, const std::vector<double>& pi, double nu,
    std::size_t instances, mcbench::Rng& rng) {
  std::vector<mcbench::ComparisonTally> tallies;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      double s = std::sqrt(pi[i] * pi[j]);
      double d = pi[i] + pi[j] + nu * s;
      double p_i = pi[i] / d;
      double p_j = pi[j] / d;
      mcbench::ComparisonTally t;
      t.method_i = methods[i];
      t.method_j = methods[j];
      for (std::size_t k = 0; k < instances; ++k) {
        double u = rng.uniform();
        if (u < p_i) {
          ++t.wins_i;
        } else if (u < p_i + p_j) {
          ++t.wins_j;
        } else {
          ++t.ties;
        }
      }
      tallies.push_back(t);
    }
  }
  return tallies;
}

// ---------------------------------------------------------------------------
// composite score

/// One-line evaluation of the composite score in long double, written as a
/// separate expression from the library's loop.
inline double qtext_eval(const std::array<double, 3>& m, const mcbench::QTextParams& p) {
  long double num = 0.0L, den = 0.0L;
  for (int i = 0; i < 3; ++i) {
    long double dev = static_cast<long double>(m[i]) - p.targets[i];
    num += static_cast<long double>(p.weights[i]) * m[i] *
           std::exp(-static_cast<long double>(p.penalties[i]) * dev * dev);
    den += p.weights[i];
  }
  return static_cast<double>(num / den);
}

/// Central finite-difference gradient of a scalar function of three metrics.
inline std::array<double, 3> fd_gradient(
    const std::function<double(const std::array<double, 3>&)>& f,
    const std::array<double, 3>& at, double h = 1e-6) {
  std::array<double, 3> grad{};
  for (int i = 0; i < 3; ++i) {
    std::array<double, 3> lo = at, hi = at;
    lo[i] -= h;
    hi[i] += h;
    grad[i] = (f(hi) - f(lo)) / (2.0 * h);
  }
  return grad;
}

/// Spearman via the no-ties rank-difference formula 1 - 6 sum d^2 / (n(n^2-1)).
/// Only valid when both inputs are tie-free.
inline double spearman_rank_formula(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto ranks = [&](const std::vector<double>& v) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t below = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (v[j] < v[i]) ++below;
      }
      r[i] = static_cast<double>(below) + 1.0;
    }
    return r;
  };
  std::vector<double> rx = ranks(x), ry = ranks(y);
  double sum_d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = rx[i] - ry[i];
    sum_d2 += d * d;
  }
  double nn = static_cast<double>(n);
  return 1.0 - 6.0 * sum_d2 / (nn * (nn * nn - 1.0));
}

/// Pearson correlation of two explicit rank vectors (for hand-computed tie
/// patterns).
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Best Spearman correlation over the 3-points-per-axis parameter grid.
inline double grid_best_rho(const std::vector<std::array<double, 3>>& metrics,
                            const std::vector<double>& ratings) {
  using P = mcbench::QTextParams;
  const double w[3] = {P::kWeightLo, (P::kWeightLo + P::kWeightHi) / 2, P::kWeightHi};
  const double t[3] = {P::kTargetLo, (P::kTargetLo + P::kTargetHi) / 2, P::kTargetHi};
  const double a[3] = {P::kPenaltyLo, (P::kPenaltyLo + P::kPenaltyHi) / 2, P::kPenaltyHi};

  double best = -2.0;
  std::array<int, 9> idx{};
  for (std::uint64_t code = 0; code < 19683; ++code) {  // 3^9 combinations
    std::uint64_t c = code;
    for (int k = 0; k < 9; ++k) {
      idx[static_cast<std::size_t>(k)] = static_cast<int>(c % 3);
      c /= 3;
    }
    mcbench::QTextParams params;
    for (int k = 0; k < 3; ++k) {
      params.weights[static_cast<std::size_t>(k)] = w[idx[static_cast<std::size_t>(k)]];
      params.targets[static_cast<std::size_t>(k)] = t[idx[static_cast<std::size_t>(k + 3)]];
      params.penalties[static_cast<std::size_t>(k)] = a[idx[static_cast<std::size_t>(k + 6)]];
    }
    std::vector<double> scores;
    scores.reserve(metrics.size());
    for (const auto& m : metrics) scores.push_back(mcbench::score(m, params));
    bool constant = true;
    for (double s : scores) {
      if (s != scores.front()) {
        constant = false;
        break;
      }
    }
    if (constant) continue;
    double rho = mcbench::spearman(scores, ratings);
    best = std::max(best, rho);
  }
  return best;
}

}  // namespace oracles
