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

#ifndef WSHAP_ESTIMATORS_HPP
#define WSHAP_ESTIMATORS_HPP

#include <cstdint>
#include <optional>

#include "wshap/game.hpp"
#include "wshap/oracle.hpp"
#include "wshap/weights.hpp"

namespace wshap {

struct EstimatorConfig {
  std::uint64_t n_samples = 10000;
  std::uint64_t seed = 0;
  bool paired_sampling = true;          // evaluate each subset with and without the player
  std::optional<double> constraint_constant;  // impose 1^T psi = C when set
  double ridge = 1e-8;                  // stabilizer for the sampled normal equations

  void validate() const;
};

/// Monte Carlo semivalue estimate. Each sample draws a player i uniformly
/// and a subset size j (0..n-1) with probability w~(j+1)/n, then a uniform
/// j-subset avoiding i; the paired difference v(s+i) - v(s) is an unbiased
/// per-coordinate estimate after scaling by n. Performs exactly
/// 2 * n_samples game lookups. std_err holds plain per-coordinate
/// sample-variance standard errors.
Attribution monte_carlo_semivalue(const Game& game, const WeightScheme& ws,
                                  const EstimatorConfig& cfg);

/// Sampled weighted-least-squares estimate of the expectation objective
/// E_{p(s)}[(v(s) - v(0) - s^T psi)^2]: draws n_samples subsets from p(s),
/// assembles the empirical normal equations (ridge-stabilized), and
/// solves, optionally under 1^T psi = C. Performs exactly n_samples + 2
/// game lookups (the sampled subsets plus v(empty) and v(full)).
/// Converges to exact_constrained_wls.
Attribution regression_estimate(const Game& game, const WeightScheme& ws,
                                const EstimatorConfig& cfg);

struct SumEstimate {
  double value = 0.0;
  double std_err = 0.0;
};

/// 1^T of the Monte Carlo semivalue estimate, with the standard error of
/// the per-sample sums. Supplies the constraint constant when the exact
/// oracle is out of reach.
SumEstimate estimate_sum_constant(const Game& game, const WeightScheme& ws,
                                  const EstimatorConfig& cfg);

}  // namespace wshap

#endif  // WSHAP_ESTIMATORS_HPP
