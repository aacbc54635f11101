// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include "mcbench/davidson.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mcbench/errors.hpp"

namespace mcbench {
namespace {

struct PairCounts {
  std::size_t i = 0;  // index into the sorted roster, i < j
  std::size_t j = 0;
  double wins_i = 0.0;
  double wins_j = 0.0;
  double ties = 0.0;

  double total() const { return wins_i + wins_j + ties; }
};

struct Problem {
  std::vector<std::string> methods;
  std::vector<PairCounts> pairs;
  bool tie_mode = false;  // whether the tie parameter is estimated
};

// Profiled log-likelihood of the parameter vector theta =
// (lambda_1..lambda_{m-1} [, tau]); lambda_0 is pinned at 0. Per pair, with
// a = (lambda_i - lambda_j)/2, the three cell means share one intercept
// whose profile turns the Poisson likelihood into the multinomial
//   (wins_i - wins_j) a + ties tau - n log(e^a + e^-a + e^tau),
// a concave function (log-sum-exp of affine maps).
double log_likelihood(const Problem& prob, const Eigen::VectorXd& theta) {
  const std::size_t m = prob.methods.size();
  auto lambda = [&](std::size_t k) { return k == 0 ? 0.0 : theta[static_cast<int>(k - 1)]; };
  const double tau = prob.tie_mode ? theta[static_cast<int>(m - 1)] : 0.0;

  double ll = 0.0;
  for (const PairCounts& pc : prob.pairs) {
    double a = 0.5 * (lambda(pc.i) - lambda(pc.j));
    // log(e^a + e^-a + e^tau), stabilized around the largest exponent.
    double peak = std::max(std::fabs(a), prob.tie_mode ? tau : -HUGE_VAL);
    double lse = peak + std::log(std::exp(a - peak) + std::exp(-a - peak) +
                                 (prob.tie_mode ? std::exp(tau - peak) : 0.0));
    ll += (pc.wins_i - pc.wins_j) * a + pc.ties * tau - pc.total() * lse;
  }
  return ll;
}

void score_and_hessian(const Problem& prob, const Eigen::VectorXd& theta,
                       Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
  const int dim = static_cast<int>(theta.size());
  auto lambda = [&](std::size_t k) { return k == 0 ? 0.0 : theta[static_cast<int>(k - 1)]; };
  const double tau = prob.tie_mode ? theta[dim - 1] : 0.0;
  const int tau_idx = dim - 1;

  grad.setZero(dim);
  hess.setZero(dim, dim);
  for (const PairCounts& pc : prob.pairs) {
    double a = 0.5 * (lambda(pc.i) - lambda(pc.j));
    double peak = std::max(std::fabs(a), prob.tie_mode ? tau : -HUGE_VAL);
    double ea = std::exp(a - peak);
    double eb = std::exp(-a - peak);
    double ec = prob.tie_mode ? std::exp(tau - peak) : 0.0;
    double denom = ea + eb + ec;
    double u = ea / denom, v = eb / denom, s = ec / denom;
    double n = pc.total();

    // d/da and d/dtau of the pair's contribution.
    double fa = (pc.wins_i - pc.wins_j) - n * (u - v);
    double ft = pc.ties - n * s;
    // Second derivatives via the multinomial covariance.
    double faa = -n * ((u + v) - (u - v) * (u - v));
    double fat = n * (u - v) * s;
    double ftt = -n * s * (1.0 - s);

    int ii = static_cast<int>(pc.i) - 1;  // -1 marks the pinned reference
    int jj = static_cast<int>(pc.j) - 1;
    if (ii >= 0) {
      grad[ii] += 0.5 * fa;
      hess(ii, ii) += 0.25 * faa;
    }
    if (jj >= 0) {
      grad[jj] -= 0.5 * fa;
      hess(jj, jj) += 0.25 * faa;
    }
    if (ii >= 0 && jj >= 0) {
      hess(ii, jj) -= 0.25 * faa;
      hess(jj, ii) -= 0.25 * faa;
    }
    if (prob.tie_mode) {
      grad[tau_idx] += ft;
      hess(tau_idx, tau_idx) += ftt;
      if (ii >= 0) {
        hess(ii, tau_idx) += 0.5 * fat;
        hess(tau_idx, ii) += 0.5 * fat;
      }
      if (jj >= 0) {
        hess(jj, tau_idx) -= 0.5 * fat;
        hess(tau_idx, jj) -= 0.5 * fat;
      }
    }
  }
}

void check_connected(const Problem& prob) {
  const std::size_t m = prob.methods.size();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const PairCounts& pc : prob.pairs) {
    if (pc.total() > 0) parent[find(pc.i)] = find(pc.j);
  }
  for (std::size_t k = 1; k < m; ++k) {
    if (find(k) != find(0)) {
      throw Error(ErrorCode::DisconnectedGraph,
                  "comparison graph is disconnected: method '" + prob.methods[k] +
                      "' is not linked to '" + prob.methods[0] + "'");
    }
  }
}

void check_separation(const Problem& prob) {
  const std::size_t m = prob.methods.size();
  std::vector<double> win_mass(m, 0.0), loss_mass(m, 0.0), tie_mass(m, 0.0);
  for (const PairCounts& pc : prob.pairs) {
    win_mass[pc.i] += pc.wins_i;
    loss_mass[pc.i] += pc.wins_j;
    tie_mass[pc.i] += pc.ties;
    win_mass[pc.j] += pc.wins_j;
    loss_mass[pc.j] += pc.wins_i;
    tie_mass[pc.j] += pc.ties;
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (win_mass[k] > 0 && loss_mass[k] + tie_mass[k] == 0) {
      throw Error(ErrorCode::SeparationDetected,
                  "method '" + prob.methods[k] +
                      "' wins everything; its worth diverges (enable Haldane "
                      "smoothing or collect more data)");
    }
    if (loss_mass[k] > 0 && win_mass[k] + tie_mass[k] == 0) {
      throw Error(ErrorCode::SeparationDetected,
                  "method '" + prob.methods[k] +
                      "' loses everything; its worth diverges (enable Haldane "
                      "smoothing or collect more data)");
    }
  }
}

}  // namespace

double WorthTable::worth_of(const std::string& method) const {
  auto it = std::lower_bound(methods.begin(), methods.end(), method);
  if (it == methods.end() || *it != method) {
    throw Error(ErrorCode::UnknownMethod, "method '" + method + "' was not fitted");
  }
  return worths[static_cast<std::size_t>(it - methods.begin())];
}

WorthTable fit(const std::vector<ComparisonTally>& tallies, const FitConfig& cfg) {
  if (cfg.tolerance <= 0) {
    throw Error(ErrorCode::OutOfRangeInput, "tolerance must be positive");
  }
  std::set<std::string> roster;
  for (const ComparisonTally& t : tallies) {
    if (t.method_i == t.method_j) {
      throw Error(ErrorCode::DuplicateRecord,
                  "tally pairs method '" + t.method_i + "' with itself");
    }
    roster.insert(t.method_i);
    roster.insert(t.method_j);
  }
  if (roster.size() < 2) {
    throw Error(ErrorCode::DisconnectedGraph,
                "need at least two methods with comparison data");
  }

  Problem prob;
  prob.methods.assign(roster.begin(), roster.end());
  auto index_of = [&](const std::string& name) {
    return static_cast<std::size_t>(
        std::lower_bound(prob.methods.begin(), prob.methods.end(), name) -
        prob.methods.begin());
  };
  double total_ties = 0.0;
  for (const ComparisonTally& t : tallies) {
    if (t.total() == 0) continue;
    PairCounts pc;
    pc.i = index_of(t.method_i);
    pc.j = index_of(t.method_j);
    pc.wins_i = static_cast<double>(t.wins_i);
    pc.wins_j = static_cast<double>(t.wins_j);
    pc.ties = static_cast<double>(t.ties);
    if (pc.i > pc.j) {
      std::swap(pc.i, pc.j);
      std::swap(pc.wins_i, pc.wins_j);
    }
    prob.pairs.push_back(pc);
    total_ties += pc.ties;
  }

  check_connected(prob);
  if (cfg.zero_policy == FitConfig::ZeroPolicy::Haldane) {
    for (PairCounts& pc : prob.pairs) {
      pc.wins_i += 0.5;
      pc.wins_j += 0.5;
      pc.ties += 0.5;
      total_ties += 0.5;
    }
  } else {
    check_separation(prob);
  }
  prob.tie_mode = total_ties > 0;

  const std::size_t m = prob.methods.size();
  const int dim = static_cast<int>(m - 1 + (prob.tie_mode ? 1 : 0));
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);

  double ll = log_likelihood(prob, theta);
  Eigen::VectorXd grad(dim);
  Eigen::MatrixXd hess(dim, dim);
  bool converged = false;
  std::size_t iter = 0;
  for (; iter < cfg.max_iterations; ++iter) {
    score_and_hessian(prob, theta, grad, hess);
    if (grad.lpNorm<Eigen::Infinity>() < 1e-9) {
      converged = true;
      break;
    }
    Eigen::MatrixXd neg_hess = -hess;
    Eigen::VectorXd delta = neg_hess.ldlt().solve(grad);
    if (!delta.allFinite()) {
      neg_hess.diagonal().array() += 1e-10;
      delta = neg_hess.ldlt().solve(grad);
      if (!delta.allFinite()) {
        throw Error(ErrorCode::NotConverged, "Newton system is numerically singular");
      }
    }
    double step = 1.0;
    double ll_new = log_likelihood(prob, theta + step * delta);
    while (!(ll_new > ll) && step > 1e-12) {
      step *= 0.5;
      ll_new = log_likelihood(prob, theta + step * delta);
    }
    if (!(ll_new > ll)) {
      // No step along the Newton direction improves the likelihood in double
      // precision, so the iterate is at the numerical optimum even when the
      // gradient carries leftover rounding noise from the large counts.
      converged = true;
      ++iter;
      break;
    }
    theta += step * delta;
    double change = std::fabs(ll_new - ll);
    ll = ll_new;
    if (change <= cfg.tolerance * std::max(1.0, std::fabs(ll)) &&
        grad.lpNorm<Eigen::Infinity>() < 1e-6) {
      converged = true;
      ++iter;
      break;
    }
  }

  WorthTable table;
  table.methods = prob.methods;
  table.iterations = iter;
  table.converged = converged;

  // Pinned lambda_0 = 0; map back to the simplex.
  std::vector<double> lambdas(m, 0.0);
  for (std::size_t k = 1; k < m; ++k) lambdas[k] = theta[static_cast<int>(k - 1)];
  double peak = *std::max_element(lambdas.begin(), lambdas.end());
  double z = 0.0;
  for (double l : lambdas) z += std::exp(l - peak);
  table.worths.resize(m);
  for (std::size_t k = 0; k < m; ++k) table.worths[k] = std::exp(lambdas[k] - peak) / z;

  if (prob.tie_mode) {
    double tau = theta[dim - 1];
    table.nu = tau < -30.0 ? 0.0 : std::exp(tau);
  } else {
    table.nu = 0.0;
  }

  // Multinomial log-likelihood at the fit (0 log 0 taken as 0).
  double mll = 0.0;
  for (const PairCounts& pc : prob.pairs) {
    double pi = table.worths[pc.i], pj = table.worths[pc.j];
    double root = std::sqrt(pi * pj);
    double denom = pi + pj + table.nu * root;
    if (pc.wins_i > 0) mll += pc.wins_i * std::log(pi / denom);
    if (pc.wins_j > 0) mll += pc.wins_j * std::log(pj / denom);
    if (pc.ties > 0) mll += pc.ties * std::log(table.nu * root / denom);
  }
  table.loglik = mll;

  table.ranking = table.methods;
  std::sort(table.ranking.begin(), table.ranking.end(),
            [&](const std::string& a, const std::string& b) {
              double wa = table.worth_of(a), wb = table.worth_of(b);
              if (wa != wb) return wa > wb;
              return a < b;
            });
  return table;
}

PreferenceProbabilities preference_probability(const WorthTable& table,
                                               const std::string& method_i,
                                               const std::string& method_j) {
  if (method_i == method_j) {
    throw Error(ErrorCode::UnknownMethod, "preference of a method against itself");
  }
  double pi = table.worth_of(method_i);
  double pj = table.worth_of(method_j);
  double root = std::sqrt(pi * pj);
  double denom = pi + pj + table.nu * root;
  PreferenceProbabilities p;
  p.i_wins = pi / denom;
  p.j_wins = pj / denom;
  p.tie = table.nu * root / denom;
  return p;
}

}  // namespace mcbench
