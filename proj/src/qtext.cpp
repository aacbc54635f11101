// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include "mcbench/qtext.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "mcbench/errors.hpp"
#include "mcbench/rng.hpp"

namespace mcbench {
namespace {

void check_bound(double value, double lo, double hi, const char* what) {
  if (!(value >= lo && value <= hi)) {
    throw Error(ErrorCode::OutOfRangeInput,
                std::string(what) + " " + std::to_string(value) + " outside [" +
                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

struct ColumnIndexes {
  std::size_t perplexity;
  std::size_t coherence;
  std::size_t diversity;
};

ColumnIndexes metric_columns(const MetricSchema& schema) {
  int p = schema.metric_index("perplexity");
  int c = schema.metric_index("coherence");
  int d = schema.metric_index("diversity");
  if (p < 0 || c < 0 || d < 0) {
    throw Error(ErrorCode::MismatchedMetrics,
                "composite scoring needs perplexity, coherence, and diversity columns");
  }
  return {static_cast<std::size_t>(p), static_cast<std::size_t>(c),
          static_cast<std::size_t>(d)};
}

double clamp01(double x, std::size_t* clamped) {
  if (x < 0.0) {
    if (clamped != nullptr) ++*clamped;
    return 0.0;
  }
  if (x > 1.0) {
    if (clamped != nullptr) ++*clamped;
    return 1.0;
  }
  return x;
}

/// Mean ranks, ties averaged.
std::vector<double> mean_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the mean of ranks i+1..j+1.
    double rank = static_cast<double>(i + j) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

void QTextParams::validate() const {
  for (int i = 0; i < 3; ++i) {
    check_bound(weights[i], kWeightLo, kWeightHi, "weight");
    check_bound(targets[i], kTargetLo, kTargetHi, "target");
    check_bound(penalties[i], kPenaltyLo, kPenaltyHi, "penalty");
  }
}

void QTextParams::clip() {
  for (int i = 0; i < 3; ++i) {
    weights[i] = std::clamp(weights[i], kWeightLo, kWeightHi);
    targets[i] = std::clamp(targets[i], kTargetLo, kTargetHi);
    penalties[i] = std::clamp(penalties[i], kPenaltyLo, kPenaltyHi);
  }
}

std::pair<std::vector<NormalizedRecord>, NormalizationBounds> normalize(
    const std::vector<MetricRecord>& records, const MetricSchema& schema) {
  ColumnIndexes cols = metric_columns(schema);
  if (records.empty()) {
    throw Error(ErrorCode::DegenerateSpread, "cannot normalize an empty record set");
  }
  auto bounds_over = [&](std::size_t col) {
    MetricBounds b{records.front().values[col], records.front().values[col]};
    for (const MetricRecord& rec : records) {
      b.min = std::min(b.min, rec.values[col]);
      b.max = std::max(b.max, rec.values[col]);
    }
    return b;
  };
  NormalizationBounds bounds;
  bounds.perplexity = bounds_over(cols.perplexity);
  bounds.coherence = bounds_over(cols.coherence);
  bounds.diversity = bounds_over(cols.diversity);
  auto check_spread = [](const MetricBounds& b, const char* name) {
    if (!(b.max > b.min)) {
      throw Error(ErrorCode::DegenerateSpread,
                  std::string(name) + " is constant over the dataset (" +
                      std::to_string(b.min) + "); min-max normalization is undefined");
    }
  };
  check_spread(bounds.perplexity, "perplexity");
  check_spread(bounds.coherence, "coherence");
  check_spread(bounds.diversity, "diversity");
  std::vector<NormalizedRecord> out = apply_bounds(records, schema, bounds, nullptr);
  return {std::move(out), std::move(bounds)};
}

std::vector<NormalizedRecord> apply_bounds(const std::vector<MetricRecord>& records,
                                           const MetricSchema& schema,
                                           const NormalizationBounds& bounds,
                                           std::size_t* clamped) {
  ColumnIndexes cols = metric_columns(schema);
  auto check_spread = [](const MetricBounds& b, const char* name) {
    if (!(b.max > b.min)) {
      throw Error(ErrorCode::DegenerateSpread,
                  std::string(name) + " bounds have no spread");
    }
  };
  check_spread(bounds.perplexity, "perplexity");
  check_spread(bounds.coherence, "coherence");
  check_spread(bounds.diversity, "diversity");
  if (clamped != nullptr) *clamped = 0;
  std::vector<NormalizedRecord> out;
  out.reserve(records.size());
  for (const MetricRecord& rec : records) {
    NormalizedRecord nr;
    nr.instance_id = rec.instance_id;
    nr.method_id = rec.method_id;
    const auto& pb = bounds.perplexity;
    const auto& cb = bounds.coherence;
    const auto& db = bounds.diversity;
    nr.m[0] = clamp01((pb.max - rec.values[cols.perplexity]) / (pb.max - pb.min), clamped);
    nr.m[1] = clamp01((rec.values[cols.coherence] - cb.min) / (cb.max - cb.min), clamped);
    nr.m[2] = clamp01((rec.values[cols.diversity] - db.min) / (db.max - db.min), clamped);
    out.push_back(std::move(nr));
  }
  return out;
}

double score(const std::array<double, 3>& m, const QTextParams& params) {
  params.validate();
  double weighted = 0.0;
  double weight_sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (!(m[i] >= 0.0 && m[i] <= 1.0)) {
      throw Error(ErrorCode::OutOfRangeInput,
                  "normalized metric " + std::to_string(i + 1) + " = " +
                      std::to_string(m[i]) + " outside [0,1]");
    }
    double dev = m[i] - params.targets[i];
    double penalty = std::exp(-params.penalties[i] * dev * dev);
    weighted += params.weights[i] * m[i] * penalty;
    weight_sum += params.weights[i];
  }
  return weighted / weight_sum;
}

std::array<double, 3> score_gradient(const std::array<double, 3>& m,
                                     const QTextParams& params) {
  params.validate();
  double weight_sum = params.weights[0] + params.weights[1] + params.weights[2];
  std::array<double, 3> grad{};
  for (int i = 0; i < 3; ++i) {
    double dev = m[i] - params.targets[i];
    double penalty = std::exp(-params.penalties[i] * dev * dev);
    grad[i] = params.weights[i] * penalty * (1.0 - 2.0 * params.penalties[i] * m[i] * dev) /
              weight_sum;
  }
  return grad;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::KeyMisalignment, "correlation inputs differ in length");
  }
  if (x.size() < 3) {
    throw Error(ErrorCode::InsufficientPairs,
                "Spearman correlation needs at least 3 pairs, got " +
                    std::to_string(x.size()));
  }
  std::vector<double> rx = mean_ranks(x);
  std::vector<double> ry = mean_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = rx[i] - mx;
    double dy = ry[i] - my;
    cov += dx * dy;
    vx += dx * dx;
    vy += dy * dy;
  }
  if (vx == 0.0 || vy == 0.0) {
    throw Error(ErrorCode::ConstantInput,
                "Spearman correlation is undefined for a constant input");
  }
  return cov / std::sqrt(vx * vy);
}

AlignedRatings align_ratings(const std::vector<NormalizedRecord>& data,
                             const Ratings& ratings) {
  if (data.empty() || ratings.empty()) {
    throw Error(ErrorCode::KeyMisalignment, "no data or no ratings to align");
  }
  std::set<std::string> seen_keys;
  for (const auto& [key, rating] : ratings) {
    if (!seen_keys.insert(key).second) {
      throw Error(ErrorCode::KeyMisalignment, "duplicate rating key '" + key + "'");
    }
  }

  std::map<std::string, std::vector<std::array<double, 3>>> by_method;
  std::map<std::string, std::vector<std::array<double, 3>>> by_record;
  for (const NormalizedRecord& rec : data) {
    by_method[rec.method_id].push_back(rec.m);
    auto [it, fresh] = by_record.try_emplace(rec.instance_id + "|" + rec.method_id);
    if (!fresh) {
      throw Error(ErrorCode::DuplicateRecord,
                  "two rows for instance '" + rec.instance_id + "', method '" +
                      rec.method_id + "'");
    }
    it->second.push_back(rec.m);
  }

  bool all_methods = true;
  bool all_records = true;
  for (const auto& [key, rating] : ratings) {
    if (by_method.find(key) == by_method.end()) all_methods = false;
    if (by_record.find(key) == by_record.end()) all_records = false;
  }

  AlignedRatings aligned;
  if (all_methods) {
    aligned.keying = AlignedRatings::Keying::Method;
    for (const auto& [key, rating] : ratings) {
      aligned.metric_groups.push_back(by_method[key]);
      aligned.ratings.push_back(rating);
    }
  } else if (all_records) {
    aligned.keying = AlignedRatings::Keying::Record;
    for (const auto& [key, rating] : ratings) {
      aligned.metric_groups.push_back(by_record[key]);
      aligned.ratings.push_back(rating);
    }
  } else {
    throw Error(ErrorCode::KeyMisalignment,
                "rating keys resolve neither as method ids nor as "
                "instance|method composites");
  }
  return aligned;
}

namespace {

double rho_for(const AlignedRatings& aligned, const QTextParams& params) {
  std::vector<double> scores;
  scores.reserve(aligned.metric_groups.size());
  for (const auto& group : aligned.metric_groups) {
    double sum = 0.0;
    for (const auto& m : group) sum += score(m, params);
    scores.push_back(sum / static_cast<double>(group.size()));
  }
  return spearman(scores, aligned.ratings);
}

std::array<double*, 9> coordinates(QTextParams& p) {
  return {&p.weights[0], &p.weights[1], &p.weights[2],
          &p.targets[0], &p.targets[1], &p.targets[2],
          &p.penalties[0], &p.penalties[1], &p.penalties[2]};
}

}  // namespace

TuneResult tune(const std::vector<NormalizedRecord>& data, const Ratings& ratings,
                const TuneConfig& cfg) {
  if (cfg.max_trials < 1 || cfg.restarts < 1 || !(cfg.perturbation_scale > 0)) {
    throw Error(ErrorCode::OutOfRangeInput, "invalid tuner configuration");
  }
  AlignedRatings aligned = align_ratings(data, ratings);
  bool constant = std::all_of(aligned.ratings.begin(), aligned.ratings.end(),
                              [&](double r) { return r == aligned.ratings.front(); });
  if (constant) {
    throw Error(ErrorCode::DegenerateRatings,
                "all human ratings are equal; correlation is undefined");
  }

  TuneResult result;
  result.rho = -2.0;  // below any correlation
  for (std::size_t restart = 0; restart < cfg.restarts; ++restart) {
    Rng rng(derive_seed(cfg.rng_seed, restart));
    QTextParams incumbent = QTextParams::initial();
    double incumbent_rho = rho_for(aligned, incumbent);
    result.trace.push_back({restart, 0, incumbent_rho, incumbent_rho, true});

    for (std::size_t trial = 1; trial <= cfg.max_trials; ++trial) {
      QTextParams proposal = incumbent;
      for (double* coord : coordinates(proposal)) {
        *coord += cfg.perturbation_scale * rng.gaussian();
      }
      proposal.clip();
      double rho = rho_for(aligned, proposal);
      bool accepted = rho > incumbent_rho;
      if (accepted) {
        incumbent = proposal;
        incumbent_rho = rho;
      }
      result.trace.push_back({restart, trial, rho, incumbent_rho, accepted});
    }
    if (incumbent_rho > result.rho) {
      result.rho = incumbent_rho;
      result.params = incumbent;
      result.best_restart = restart;
    }
  }
  return result;
}

}  // namespace mcbench
