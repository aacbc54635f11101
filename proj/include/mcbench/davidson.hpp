// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mcbench/dominance.hpp"

namespace mcbench {

/// Fit controls for the tie-aware paired-comparison model.
struct FitConfig {
  std::size_t max_iterations = 500;
  /// Relative log-likelihood change that counts as converged.
  double tolerance = 1e-10;
  /// What to do when a method wins or loses everything (its worth would
  /// diverge): refuse, or smooth every count cell by +0.5.
  enum class ZeroPolicy { Error, Haldane };
  ZeroPolicy zero_policy = ZeroPolicy::Error;
};

/// Maximum-likelihood worths under the tie-extended Bradley-Terry model
///   P(i beats j) = pi_i / (pi_i + pi_j + nu * sqrt(pi_i * pi_j)),
/// with ties getting the nu term's share. Worths sum to one.
struct WorthTable {
  std::vector<std::string> methods;  // sorted method ids
  std::vector<double> worths;        // aligned with methods, on the simplex
  double nu = 0.0;
  double loglik = 0.0;               // multinomial log-likelihood at the fit
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<std::string> ranking;  // descending worth, ties by method id

  /// Throws UnknownMethod when absent.
  double worth_of(const std::string& method) const;
};

struct PreferenceProbabilities {
  double i_wins = 0.0;
  double j_wins = 0.0;
  double tie = 0.0;
};

/// Fits worths and nu by Newton ascent on the profiled log-likelihood of the
/// per-pair Poisson reformulation (each pair's three cells share one
/// nuisance intercept, which has a closed-form profile). The likelihood is
/// concave, so with step halving the ascent is globally convergent.
///
/// Throws DisconnectedGraph when the comparison graph does not connect all
/// methods, and SeparationDetected under ZeroPolicy::Error when some
/// method's worth would diverge. A fit that runs out of iterations returns
/// with converged = false rather than throwing. When no ties were observed
/// at all, the tie parameter is dropped and nu is reported as 0 (the model
/// reduces to ordinary Bradley-Terry).
WorthTable fit(const std::vector<ComparisonTally>& tallies, const FitConfig& cfg = {});

/// The model's win/loss/tie probabilities for one ordered pair; the triple
/// sums to one. Throws UnknownMethod.
PreferenceProbabilities preference_probability(const WorthTable& table,
                                               const std::string& method_i,
                                               const std::string& method_j);

}  // namespace mcbench
