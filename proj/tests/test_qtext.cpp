// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "mcbench/dominance.hpp"
#include "mcbench/errors.hpp"
#include "mcbench/qtext.hpp"
#include "mcbench/rng.hpp"
#include "oracles.hpp"

using mcbench::Error;
using mcbench::ErrorCode;
using mcbench::MetricRecord;
using mcbench::MetricSchema;
using mcbench::NormalizedRecord;
using mcbench::QTextParams;
using mcbench::Ratings;
using mcbench::TuneConfig;

namespace {

// Schema order: coherence, diversity, perplexity.
MetricRecord rec(const std::string& instance, const std::string& method, double coh,
                 double div, double ppl) {
  return {instance, method, {coh, div, ppl}};
}

NormalizedRecord nrec(const std::string& instance, const std::string& method,
                      std::array<double, 3> m) {
  return {instance, method, m};
}

}  // namespace

TEST_CASE("qtext: score at the penalty peaks is the weighted metric mean") {
  QTextParams p;
  p.targets = {0.2, 0.4, 0.6};
  CHECK(mcbench::score({0.2, 0.4, 0.6}, p) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("qtext: zero metrics give a zero score") {
  QTextParams p = QTextParams::tuned_defaults();
  p.targets[1] = 0.0;
  CHECK(mcbench::score({0.0, 0.0, 0.0}, p) == 0.0);
}

TEST_CASE("qtext: score matches the independent evaluation on the shipped parameters") {
  QTextParams p = QTextParams::tuned_defaults();
  std::array<double, 3> mid = {0.5, 0.5, 0.5};
  CHECK(mcbench::score(mid, p) == doctest::Approx(oracles::qtext_eval(mid, p)).epsilon(1e-14));

  mcbench::Rng rng(606);
  for (int trial = 0; trial < 500; ++trial) {
    std::array<double, 3> m = {rng.uniform(), rng.uniform(), rng.uniform()};
    double got = mcbench::score(m, p);
    CHECK(got == doctest::Approx(oracles::qtext_eval(m, p)).epsilon(1e-13));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("qtext: score moving away from a target decays") {
  QTextParams p;
  p.penalties = {10.0, 10.0, 10.0};
  p.targets = {0.5, 0.5, 0.5};
  double at_peak = mcbench::score({0.5, 0.5, 0.5}, p);
  double nearby = mcbench::score({0.7, 0.5, 0.5}, p);
  double far = mcbench::score({0.9, 0.5, 0.5}, p);
  CHECK(at_peak > nearby);
  CHECK(nearby > far);
}

TEST_CASE("qtext: score validates metric range and parameter bounds") {
  QTextParams p;
  CHECK_THROWS_AS(mcbench::score({1.2, 0.5, 0.5}, p), Error);
  CHECK_THROWS_AS(mcbench::score({-0.1, 0.5, 0.5}, p), Error);
  p.weights[0] = 0.01;  // below the weight floor
  CHECK_THROWS_AS(mcbench::score({0.5, 0.5, 0.5}, p), Error);
  try {
    mcbench::score({0.5, 0.5, 0.5}, p);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRangeInput);
  }
}

TEST_CASE("qtext: parameter validation and clipping") {
  QTextParams p;
  p.weights = {0.05, 6.0, 1.0};
  p.targets = {-0.2, 1.4, 0.5};
  p.penalties = {0.01, 12.0, 1.0};
  CHECK_THROWS_AS(p.validate(), Error);
  p.clip();
  CHECK(p.weights[0] == QTextParams::kWeightLo);
  CHECK(p.weights[1] == QTextParams::kWeightHi);
  CHECK(p.targets[0] == 0.0);
  CHECK(p.targets[1] == 1.0);
  CHECK(p.penalties[0] == QTextParams::kPenaltyLo);
  CHECK(p.penalties[1] == QTextParams::kPenaltyHi);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("qtext: analytic gradient matches finite differences") {
  QTextParams p = QTextParams::tuned_defaults();
  mcbench::Rng rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, 3> m = {rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95),
                               rng.uniform(0.05, 0.95)};
    auto analytic = mcbench::score_gradient(m, p);
    auto numeric = oracles::fd_gradient(
        [&](const std::array<double, 3>& at) { return mcbench::score(at, p); }, m);
    for (int k = 0; k < 3; ++k) {
      CHECK(analytic[static_cast<std::size_t>(k)] ==
            doctest::Approx(numeric[static_cast<std::size_t>(k)]).epsilon(1e-6));
    }
  }
}

TEST_CASE("qtext: spearman exact fixtures") {
  CHECK(mcbench::spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == 1.0);
  CHECK(mcbench::spearman({1, 2, 3, 4}, {8, 4, 2, 1}) == -1.0);
  CHECK(mcbench::spearman({1, 2, 3, 4}, {1, 3, 2, 4}) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(mcbench::spearman({1, 2, 3, 4}, {1, 3, 2, 4}) ==
        doctest::Approx(oracles::spearman_rank_formula({1, 2, 3, 4}, {1, 3, 2, 4}))
            .epsilon(1e-15));
}

TEST_CASE("qtext: spearman agrees with the rank-difference formula on tie-free data") {
  mcbench::Rng rng(909);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 3 + rng.below(20);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(rng.uniform());
      y.push_back(rng.uniform());
    }
    CHECK(mcbench::spearman(x, y) ==
          doctest::Approx(oracles::spearman_rank_formula(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("qtext: spearman tie handling matches hand-computed mean ranks") {
  // Each case lists raw inputs and their mean ranks worked out by hand;
  // the expected value is the Pearson correlation of those rank vectors.
  struct Case {
    std::vector<double> x, y;
    std::vector<double> rx, ry;
  };
  std::vector<Case> cases = {
      {{1, 1, 2, 3}, {1, 2, 3, 4}, {1.5, 1.5, 3, 4}, {1, 2, 3, 4}},
      {{1, 1, 2, 2}, {2, 2, 1, 1}, {1.5, 1.5, 3.5, 3.5}, {3.5, 3.5, 1.5, 1.5}},
      {{1, 2, 2, 3}, {4, 8, 8, 16}, {1, 2.5, 2.5, 4}, {1, 2.5, 2.5, 4}},
      {{1, 1, 1, 2}, {1, 2, 3, 4}, {2, 2, 2, 4}, {1, 2, 3, 4}},
      {{1, 2, 3, 4, 5}, {1, 1, 2, 2, 2}, {1, 2, 3, 4, 5}, {1.5, 1.5, 4, 4, 4}},
      {{1, 1, 2, 2}, {1, 2, 1, 2}, {1.5, 1.5, 3.5, 3.5}, {1.5, 3.5, 1.5, 3.5}},
  };
  for (const Case& c : cases) {
    double expected = oracles::pearson(c.rx, c.ry);
    CHECK(mcbench::spearman(c.x, c.y) == doctest::Approx(expected).epsilon(1e-14));
  }
  // Spot values for the first, fourth, and sixth patterns.
  CHECK(mcbench::spearman({1, 1, 2, 3}, {1, 2, 3, 4}) ==
        doctest::Approx(std::sqrt(0.9)).epsilon(1e-14));
  CHECK(mcbench::spearman({1, 1, 1, 2}, {1, 2, 3, 4}) ==
        doctest::Approx(std::sqrt(0.6)).epsilon(1e-14));
  CHECK(mcbench::spearman({1, 1, 2, 2}, {1, 2, 1, 2}) == 0.0);
}

TEST_CASE("qtext: spearman is invariant under monotone transforms") {
  mcbench::Rng rng(111);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 4 + rng.below(10);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(rng.uniform(0.1, 5.0));
      y.push_back(rng.uniform(0.1, 5.0));
    }
    double base = mcbench::spearman(x, y);
    std::vector<double> xt = x, yt = y;
    for (double& v : xt) v = std::log(v);
    for (double& v : yt) v = 3.0 * v + 7.0;
    CHECK(mcbench::spearman(xt, yt) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("qtext: spearman input validation") {
  CHECK_THROWS_AS(mcbench::spearman({1, 2}, {1, 2}), Error);
  try {
    mcbench::spearman({1, 2}, {1, 2});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientPairs);
  }
  CHECK_THROWS_AS(mcbench::spearman({1, 1, 1}, {1, 2, 3}), Error);
  try {
    mcbench::spearman({1, 1, 1}, {1, 2, 3});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConstantInput);
  }
  CHECK_THROWS_AS(mcbench::spearman({1, 2, 3}, {1, 2}), Error);
}

TEST_CASE("qtext: normalization endpoints and inversion") {
  MetricSchema schema = MetricSchema::standard();
  std::vector<MetricRecord> records = {
      rec("i1", "a", -4.0, 0.1, 2.0),
      rec("i2", "b", -3.0, 0.5, 6.0),
      rec("i3", "c", -2.0, 0.9, 10.0),
  };
  auto [normalized, bounds] = mcbench::normalize(records, schema);
  REQUIRE(normalized.size() == 3);

  // Perplexity 2, 6, 10 inverts to 1.0, 0.5, 0.0.
  CHECK(normalized[0].m[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(normalized[1].m[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normalized[2].m[0] == doctest::Approx(0.0).epsilon(1e-15));

  // Coherence -4..-2 scales directly.
  CHECK(normalized[0].m[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normalized[2].m[1] == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(bounds.perplexity.min == 2.0);
  CHECK(bounds.perplexity.max == 10.0);
  CHECK(bounds.coherence.min == -4.0);
  CHECK(bounds.diversity.max == 0.9);
}

TEST_CASE("qtext: constant metrics cannot be normalized") {
  MetricSchema schema = MetricSchema::standard();
  std::vector<MetricRecord> records = {rec("i1", "a", -1.0, 0.5, 3.0),
                                       rec("i2", "b", -2.0, 0.5, 4.0)};
  CHECK_THROWS_AS(mcbench::normalize(records, schema), Error);
  try {
    mcbench::normalize(records, schema);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSpread);
  }
}

TEST_CASE("qtext: normalization needs all three standard metrics") {
  MetricSchema schema;
  schema.metrics = {{"coherence", mcbench::Direction::HigherIsBetter},
                    {"perplexity", mcbench::Direction::LowerIsBetter}};
  std::vector<MetricRecord> records = {{"i1", "a", {-1.0, 3.0}}, {"i2", "b", {-2.0, 4.0}}};
  CHECK_THROWS_AS(mcbench::normalize(records, schema), Error);
  try {
    mcbench::normalize(records, schema);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MismatchedMetrics);
  }
}

TEST_CASE("qtext: stored bounds clamp out-of-range values and count them") {
  MetricSchema schema = MetricSchema::standard();
  std::vector<MetricRecord> records = {
      rec("i1", "a", -4.0, 0.1, 2.0),
      rec("i2", "b", -2.0, 0.9, 10.0),
  };
  auto [normalized, bounds] = mcbench::normalize(records, schema);
  (void)normalized;

  std::vector<MetricRecord> fresh = {rec("i3", "c", -5.0, 0.95, 12.0)};
  std::size_t clamped = 0;
  auto rescaled = mcbench::apply_bounds(fresh, schema, bounds, &clamped);
  REQUIRE(rescaled.size() == 1);
  CHECK(clamped == 3);  // every metric lands outside the stored span
  CHECK(rescaled[0].m[0] == 0.0);  // perplexity 12 > max 10 under the inverse scale
  CHECK(rescaled[0].m[1] == 0.0);  // coherence -5 < min -4
  CHECK(rescaled[0].m[2] == 1.0);  // diversity 0.95 > max 0.9

  std::vector<MetricRecord> inside = {rec("i4", "d", -3.0, 0.5, 6.0)};
  std::size_t untouched = 0;
  auto mid = mcbench::apply_bounds(inside, schema, bounds, &untouched);
  CHECK(untouched == 0);
  CHECK(mid[0].m[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mid[0].m[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mid[0].m[2] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("qtext: ratings align by method id") {
  std::vector<NormalizedRecord> data = {
      nrec("i1", "a", {0.1, 0.2, 0.3}), nrec("i2", "a", {0.2, 0.3, 0.4}),
      nrec("i1", "b", {0.5, 0.6, 0.7}), nrec("i2", "b", {0.6, 0.7, 0.8}),
  };
  Ratings ratings = {{"a", 1.0}, {"b", 2.0}};
  auto aligned = mcbench::align_ratings(data, ratings);
  CHECK(aligned.keying == mcbench::AlignedRatings::Keying::Method);
  REQUIRE(aligned.metric_groups.size() == 2);
  CHECK(aligned.metric_groups[0].size() == 2);  // both rows of method a
  CHECK(aligned.ratings == std::vector<double>{1.0, 2.0});
}

TEST_CASE("qtext: ratings align by instance|method composite") {
  std::vector<NormalizedRecord> data = {
      nrec("i1", "a", {0.1, 0.2, 0.3}),
      nrec("i2", "a", {0.2, 0.3, 0.4}),
      nrec("i1", "b", {0.5, 0.6, 0.7}),
  };
  Ratings ratings = {{"i1|a", 1.0}, {"i2|a", 2.0}, {"i1|b", 3.0}};
  auto aligned = mcbench::align_ratings(data, ratings);
  CHECK(aligned.keying == mcbench::AlignedRatings::Keying::Record);
  REQUIRE(aligned.metric_groups.size() == 3);
  for (const auto& group : aligned.metric_groups) CHECK(group.size() == 1);
}

TEST_CASE("qtext: misaligned rating keys are rejected") {
  std::vector<NormalizedRecord> data = {
      nrec("i1", "a", {0.1, 0.2, 0.3}),
      nrec("i1", "b", {0.5, 0.6, 0.7}),
  };
  auto expect_misaligned = [&](const Ratings& ratings) {
    try {
      mcbench::align_ratings(data, ratings);
      FAIL_CHECK("expected KeyMisalignment");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::KeyMisalignment);
    }
  };
  expect_misaligned({{"a", 1.0}, {"i1|b", 2.0}});   // mixed keying styles
  expect_misaligned({{"a", 1.0}, {"zz", 2.0}});     // unmatched key
  expect_misaligned({{"a", 1.0}, {"a", 2.0}});      // duplicate key
  expect_misaligned({{"i1|a", 1.0}, {"i9|b", 2.0}});  // unmatched composite
}

TEST_CASE("qtext: tuner reaches perfect self-correlation immediately") {
  std::vector<NormalizedRecord> data;
  mcbench::Rng rng(246);
  for (int i = 0; i < 8; ++i) {
    data.push_back(nrec("i" + std::to_string(i), "m" + std::to_string(i),
                        {rng.uniform(), rng.uniform(), rng.uniform()}));
  }
  Ratings ratings;
  for (const auto& r : data) {
    ratings.emplace_back(r.instance_id + "|" + r.method_id,
                         mcbench::score(r.m, QTextParams::initial()));
  }
  TuneConfig cfg;
  cfg.max_trials = 10;
  cfg.rng_seed = 1;
  auto result = mcbench::tune(data, ratings, cfg);
  CHECK(result.rho == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.trace.front().trial == 0);
  CHECK(result.trace.front().incumbent_rho == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("qtext: tuner trace is monotone and stays within bounds") {
  std::vector<NormalizedRecord> data;
  mcbench::Rng rng(135);
  for (int i = 0; i < 12; ++i) {
    data.push_back(nrec("i" + std::to_string(i), "m",
                        {rng.uniform(), rng.uniform(), rng.uniform()}));
  }
  Ratings ratings;
  for (const auto& r : data) {
    ratings.emplace_back(r.instance_id + "|" + r.method_id, r.m[2] + 0.1 * rng.uniform());
  }
  TuneConfig cfg;
  cfg.max_trials = 200;
  cfg.restarts = 2;
  cfg.rng_seed = 99;
  auto result = mcbench::tune(data, ratings, cfg);

  CHECK_NOTHROW(result.params.validate());
  double last = -2.0;
  std::size_t restart = 0;
  for (const auto& trial : result.trace) {
    if (trial.restart != restart) {
      restart = trial.restart;
      last = -2.0;  // incumbent resets per restart
    }
    CHECK(trial.incumbent_rho >= last - 1e-15);
    last = trial.incumbent_rho;
    if (trial.accepted) CHECK(trial.incumbent_rho == trial.proposal_rho);
  }
  CHECK(result.rho >= result.trace.front().incumbent_rho);
}

TEST_CASE("qtext: tuner runs are deterministic given the seed") {
  std::vector<NormalizedRecord> data;
  mcbench::Rng rng(777);
  for (int i = 0; i < 10; ++i) {
    data.push_back(nrec("i" + std::to_string(i), "m",
                        {rng.uniform(), rng.uniform(), rng.uniform()}));
  }
  Ratings ratings;
  for (const auto& r : data) {
    ratings.emplace_back(r.instance_id + "|" + r.method_id, 1.0 - r.m[0]);
  }
  TuneConfig cfg;
  cfg.max_trials = 100;
  cfg.restarts = 3;
  cfg.rng_seed = 4242;
  auto first = mcbench::tune(data, ratings, cfg);
  auto second = mcbench::tune(data, ratings, cfg);

  CHECK(first.rho == second.rho);
  CHECK(first.best_restart == second.best_restart);
  CHECK(first.params.weights == second.params.weights);
  CHECK(first.params.targets == second.params.targets);
  CHECK(first.params.penalties == second.params.penalties);
  REQUIRE(first.trace.size() == second.trace.size());
  for (std::size_t k = 0; k < first.trace.size(); ++k) {
    CHECK(first.trace[k].restart == second.trace[k].restart);
    CHECK(first.trace[k].trial == second.trace[k].trial);
    CHECK(first.trace[k].proposal_rho == second.trace[k].proposal_rho);
    CHECK(first.trace[k].incumbent_rho == second.trace[k].incumbent_rho);
    CHECK(first.trace[k].accepted == second.trace[k].accepted);
  }

  // A different seed explores a different trajectory.
  cfg.rng_seed = 4243;
  auto third = mcbench::tune(data, ratings, cfg);
  bool any_difference = third.trace.size() != first.trace.size();
  for (std::size_t k = 0; !any_difference && k < first.trace.size(); ++k) {
    any_difference = first.trace[k].proposal_rho != third.trace[k].proposal_rho;
  }
  CHECK(any_difference);
}

TEST_CASE("qtext: constant ratings are degenerate") {
  std::vector<NormalizedRecord> data = {
      nrec("i1", "a", {0.1, 0.2, 0.3}),
      nrec("i2", "a", {0.4, 0.5, 0.6}),
      nrec("i3", "a", {0.7, 0.8, 0.9}),
  };
  Ratings ratings = {{"i1|a", 2.0}, {"i2|a", 2.0}, {"i3|a", 2.0}};
  TuneConfig cfg;
  cfg.max_trials = 5;
  try {
    mcbench::tune(data, ratings, cfg);
    FAIL_CHECK("expected DegenerateRatings");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateRatings);
  }
}
