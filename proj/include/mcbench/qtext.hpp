// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mcbench/dominance.hpp"

namespace mcbench {

/// The nine composite-score parameters. Array index convention throughout:
/// 0 = perplexity, 1 = coherence, 2 = diversity (perplexity is normalized
/// inversely, so all three normalized metrics read "higher is better").
struct QTextParams {
  std::array<double, 3> weights{1.0, 1.0, 1.0};
  std::array<double, 3> targets{0.5, 0.5, 0.5};
  std::array<double, 3> penalties{1.0, 1.0, 1.0};

  static constexpr double kWeightLo = 0.1, kWeightHi = 5.0;
  static constexpr double kTargetLo = 0.0, kTargetHi = 1.0;
  static constexpr double kPenaltyLo = 0.1, kPenaltyHi = 10.0;

  /// The search's starting point: unit weights and penalties, centered
  /// targets.
  static QTextParams initial() { return QTextParams{}; }

  /// The shipped tuned parameter set (the same values as
  /// share/qtext_params_default.json).
  static QTextParams tuned_defaults() {
    QTextParams p;
    p.weights = {0.586, 0.834, 3.853};
    p.targets = {0.458, 0.000, 0.854};
    p.penalties = {2.579, 1.496, 7.370};
    return p;
  }

  /// Throws OutOfRangeInput when any parameter is outside its bounds.
  void validate() const;

  /// Clamps every parameter into its bounds.
  void clip();
};

struct MetricBounds {
  double min = 0.0;
  double max = 0.0;
};

/// Min-max bounds used for normalization, kept so new data can be scored on
/// the same scale. `dataset` and `digest` identify where the bounds came
/// from (a content digest rather than a timestamp, so reruns stay
/// byte-identical).
struct NormalizationBounds {
  MetricBounds perplexity;
  MetricBounds coherence;
  MetricBounds diversity;
  std::string dataset;
  std::string digest;
};

/// One record's normalized metric triple, each in [0,1] with higher better.
struct NormalizedRecord {
  std::string instance_id;
  std::string method_id;
  std::array<double, 3> m{0.0, 0.0, 0.0};
};

/// Min-max normalizes the three named metrics over the whole record set:
/// perplexity inversely ((max-x)/(max-min)), coherence and diversity
/// directly ((x-min)/(max-min)). Throws DegenerateSpread when a metric is
/// constant, and MismatchedMetrics when the schema lacks one of the three.
std::pair<std::vector<NormalizedRecord>, NormalizationBounds> normalize(
    const std::vector<MetricRecord>& records, const MetricSchema& schema);

/// Rescales new records with stored bounds; out-of-range results are clamped
/// into [0,1] and counted through `clamped` when non-null.
std::vector<NormalizedRecord> apply_bounds(const std::vector<MetricRecord>& records,
                                           const MetricSchema& schema,
                                           const NormalizationBounds& bounds,
                                           std::size_t* clamped = nullptr);

/// The composite score
///   sum_i w_i M_i exp(-alpha_i (M_i - mu_i)^2) / sum_i w_i,
/// in [0,1] for normalized inputs. Throws OutOfRangeInput when a metric is
/// outside [0,1] or the parameters are out of bounds.
double score(const std::array<double, 3>& m, const QTextParams& params);

/// Analytic gradient of score with respect to each normalized metric.
std::array<double, 3> score_gradient(const std::array<double, 3>& m,
                                     const QTextParams& params);

/// Spearman rank correlation: Pearson correlation of mean ranks (ties get
/// the mean of the ranks they occupy). Throws InsufficientPairs for fewer
/// than 3 pairs and ConstantInput when either side has no variation.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Human ratings as (key, rating) pairs. Keys are either method ids or
/// "instance|method" composites; align_ratings detects which.
using Ratings = std::vector<std::pair<std::string, double>>;

/// Rating-aligned scoring groups: entry g correlates ratings[g] with the
/// mean score over metric_groups[g] (one row per group under record keying,
/// all of a method's rows under method keying).
struct AlignedRatings {
  enum class Keying { Method, Record };
  Keying keying = Keying::Method;
  std::vector<std::vector<std::array<double, 3>>> metric_groups;
  std::vector<double> ratings;
};

/// Matches rating keys against the normalized records. All keys must
/// uniformly resolve as method ids or as instance|method composites;
/// anything else (mixed, unmatched, duplicate keys) is KeyMisalignment.
AlignedRatings align_ratings(const std::vector<NormalizedRecord>& data,
                             const Ratings& ratings);

struct TuneConfig {
  std::size_t max_trials = 10000;
  double perturbation_scale = 0.1;
  std::uint64_t rng_seed = 0;
  std::size_t restarts = 1;
};

/// One proposal in the search trace.
struct TuneTrial {
  std::size_t restart = 0;
  std::size_t trial = 0;        // 0 is the starting point
  double proposal_rho = 0.0;
  double incumbent_rho = 0.0;   // after this trial
  bool accepted = false;
};

struct TuneResult {
  QTextParams params;
  double rho = 0.0;
  std::size_t best_restart = 0;
  std::vector<TuneTrial> trace;
};

/// Random local search maximizing the Spearman correlation between scores
/// and ratings: start at QTextParams::initial(), perturb all nine
/// coordinates with independent Gaussian noise (sigma =
/// perturbation_scale), clip to bounds, accept only strict improvements.
/// Each restart runs the same scheme with a seed derived from rng_seed; the
/// best restart wins, ties broken by lower restart index. Fully
/// deterministic given the config. Throws KeyMisalignment and
/// DegenerateRatings.
TuneResult tune(const std::vector<NormalizedRecord>& data, const Ratings& ratings,
                const TuneConfig& cfg);

}  // namespace mcbench
