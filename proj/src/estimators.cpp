/*
 * Copyright 2026 The wshap authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "wshap/estimators.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <vector>

namespace wshap {

void EstimatorConfig::validate() const {
  if (n_samples < 1) throw std::invalid_argument("EstimatorConfig: n_samples must be >= 1");
  if (ridge < 0.0) throw std::invalid_argument("EstimatorConfig: ridge must be >= 0");
}

namespace {

struct McAccumulator {
  std::vector<double> sum;
  std::vector<double> sum_sq;
  double total = 0.0;     // per-sample scalar n * delta
  double total_sq = 0.0;

  explicit McAccumulator(int n) : sum(static_cast<std::size_t>(n), 0.0), sum_sq(static_cast<std::size_t>(n), 0.0) {}

  void add(int player, double scaled_delta) {
    sum[static_cast<std::size_t>(player)] += scaled_delta;
    sum_sq[static_cast<std::size_t>(player)] += scaled_delta * scaled_delta;
    total += scaled_delta;
    total_sq += scaled_delta * scaled_delta;
  }
};

// Runs the MC sampling loop; shared by monte_carlo_semivalue and
// estimate_sum_constant so the two report one consistent estimate.
McAccumulator run_mc(const Game& game, const WeightScheme& ws, const EstimatorConfig& cfg) {
  cfg.validate();
  if (game.players() != ws.players()) {
    throw std::invalid_argument("monte_carlo_semivalue: game and scheme disagree on n");
  }
  const int n = game.players();

  // P(j) = w~(j+1)/n over j = 0..n-1 (size of the subset next to the
  // target player); normalized exactly by the scheme construction.
  std::vector<double> cdf(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    acc += ws.w_tilde(j + 1) / n;
    cdf[static_cast<std::size_t>(j)] = acc;
  }
  cdf.back() = 1.0;

  SubsetSampler sampler(ws, cfg.seed);
  Rng& rng = sampler.rng();
  McAccumulator out(n);
  for (std::uint64_t t = 0; t < cfg.n_samples; ++t) {
    const int i = rng.index(n);
    const double u = rng.uniform();
    int j = 0;
    while (j < n - 1 && cdf[static_cast<std::size_t>(j)] <= u) ++j;

    double delta;
    if (cfg.paired_sampling) {
      const Coalition s = sampler.sample_uniform_subset(j, i);
      delta = game.value(s.with(i)) - game.value(s);
    } else {
      // Independent draws for the two terms; same budget, higher variance.
      const double u2 = rng.uniform();
      int j2 = 0;
      while (j2 < n - 1 && cdf[static_cast<std::size_t>(j2)] <= u2) ++j2;
      const Coalition s_with = sampler.sample_uniform_subset(j, i);
      const Coalition s_without = sampler.sample_uniform_subset(j2, i);
      delta = game.value(s_with.with(i)) - game.value(s_without);
    }
    if (!std::isfinite(delta)) {
      throw std::runtime_error("monte_carlo_semivalue: non-finite game difference");
    }
    out.add(i, n * delta);
  }
  return out;
}

}  // namespace

Attribution monte_carlo_semivalue(const Game& game, const WeightScheme& ws,
                                  const EstimatorConfig& cfg) {
  const McAccumulator acc = run_mc(game, ws, cfg);
  const int n = game.players();
  const double m = static_cast<double>(cfg.n_samples);

  Attribution psi;
  psi.n = n;
  psi.alpha = ws.alpha();
  psi.beta = ws.beta();
  psi.method = "mc";
  psi.seed = cfg.seed;
  psi.n_samples = cfg.n_samples;
  psi.values.resize(static_cast<std::size_t>(n));
  psi.std_err.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double mean = acc.sum[static_cast<std::size_t>(i)] / m;
    psi.values[static_cast<std::size_t>(i)] = mean;
    const double var = m > 1.0
                           ? (acc.sum_sq[static_cast<std::size_t>(i)] / m - mean * mean) * m / (m - 1.0)
                           : 0.0;
    psi.std_err[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, var) / m);
  }
  psi.validate();
  return psi;
}

SumEstimate estimate_sum_constant(const Game& game, const WeightScheme& ws,
                                  const EstimatorConfig& cfg) {
  const McAccumulator acc = run_mc(game, ws, cfg);
  const double m = static_cast<double>(cfg.n_samples);
  SumEstimate est;
  est.value = acc.total / m;
  const double var = m > 1.0 ? (acc.total_sq / m - est.value * est.value) * m / (m - 1.0) : 0.0;
  est.std_err = std::sqrt(std::max(0.0, var) / m);
  return est;
}

Attribution regression_estimate(const Game& game, const WeightScheme& ws,
                                const EstimatorConfig& cfg) {
  cfg.validate();
  if (game.players() != ws.players()) {
    throw std::invalid_argument("regression_estimate: game and scheme disagree on n");
  }
  const int n = game.players();
  if (cfg.n_samples < static_cast<std::uint64_t>(n) + 1) {
    std::cerr << "regression_estimate: n_samples=" << cfg.n_samples
              << " below the recommended n+1=" << (n + 1) << "\n";
  }

  const double v0 = game.value(Coalition::empty(n));
  game.value(Coalition::full(n));  // part of the fixed evaluation budget

  SubsetSampler sampler(ws, cfg.seed);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  std::vector<int> members;
  for (std::uint64_t t = 0; t < cfg.n_samples; ++t) {
    const Coalition s = sampler.sample();
    const double target = game.value(s) - v0;
    members.clear();
    for (int i : s.members()) members.push_back(i);
    for (int i : members) {
      for (int j : members) a(i, j) += 1.0;
      b[i] += target;
    }
  }
  const double m = static_cast<double>(cfg.n_samples);
  a /= m;
  b /= m;

  if (cfg.ridge == 0.0) {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < n) {
      throw std::runtime_error(
          "regression_estimate: sampled system is rank-deficient; enable ridge or draw more "
          "samples");
    }
  }
  a += cfg.ridge * Eigen::MatrixXd::Identity(n, n);

  Eigen::VectorXd solution(n);
  if (cfg.constraint_constant.has_value()) {
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
    kkt.topLeftCorner(n, n) = 2.0 * a;
    kkt.topRightCorner(n, 1).setOnes();
    kkt.bottomLeftCorner(1, n).setOnes();
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = 2.0 * b;
    rhs[n] = *cfg.constraint_constant;
    const Eigen::VectorXd sol = Eigen::FullPivLU<Eigen::MatrixXd>(kkt).solve(rhs);
    if (!sol.allFinite()) {
      throw std::runtime_error("regression_estimate: constrained solve failed");
    }
    solution = sol.head(n);
  } else {
    solution = Eigen::LDLT<Eigen::MatrixXd>(a).solve(b);
    if (!solution.allFinite()) {
      throw std::runtime_error("regression_estimate: solve failed");
    }
  }

  Attribution psi;
  psi.n = n;
  psi.alpha = ws.alpha();
  psi.beta = ws.beta();
  psi.method = "wls";
  psi.seed = cfg.seed;
  psi.n_samples = cfg.n_samples;
  psi.values.assign(solution.data(), solution.data() + n);
  psi.validate();
  return psi;
}

}  // namespace wshap
