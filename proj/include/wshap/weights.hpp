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

#ifndef WSHAP_WEIGHTS_HPP
#define WSHAP_WEIGHTS_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "wshap/coalition.hpp"
#include "wshap/rng.hpp"

namespace wshap {

// log C(n, k) via log-Gamma.
double log_choose(double n, double k);
// log Beta(a, b) via log-Gamma.
double log_beta(double a, double b);

/// An (alpha, beta) weight pair. Construction accepts any positive pair;
/// in_feasible_set reports membership in the eight pairs used in practice.
struct FeasiblePair {
  double alpha;
  double beta;

  FeasiblePair(double a, double b);

  bool in_feasible_set() const;
  static const std::vector<FeasiblePair>& feasible_set();
};

/// Precomputed Beta(alpha,beta) cardinality weights for a fixed n:
///
///   w(k)  = n * Beta(k + beta - 1, n - k + alpha) / Beta(alpha, beta)
///   w~(k) = C(n-1, k-1) * w(k)                                 k = 1..n
///   q(k)  = (n-1) * w~(k) / (C(n,k) * k * (n-k))               k = 1..n-1
///
/// together with the induced sampling distribution over cardinalities,
///   P(|s| = k) proportional to w~(k) / (k (n-k)).
///
/// All tables are computed in log space so that n up to 1e5 does not
/// overflow. Normalization (1/n) sum_k w~(k) = 1 is checked at
/// construction. Instances are immutable and safe to share across
/// threads.
class WeightScheme {
 public:
  WeightScheme(int n, double alpha, double beta);

  int players() const { return n_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  // k is 1-based throughout, matching the cardinality it refers to.
  double log_w(int k) const;        // k in [1, n]
  double log_w_tilde(int k) const;  // k in [1, n]
  double log_q(int k) const;        // k in [1, n-1]
  double w(int k) const;
  double w_tilde(int k) const;
  double q(int k) const;

  /// P(|s| = k) for k = 1..n-1 (index k-1). Sums to 1.
  const std::vector<double>& cardinality_distribution() const { return card_probs_; }

  /// Per-subset probability p_k = P(|s|=k) / C(n,k).
  double subset_prob(int k) const;

  /// Q = sum_j (n-1) w~(j) / (j (n-j)), the kernel normalizer.
  double normalization_q() const { return normalization_q_; }

  /// Closed-form ratio w~(k)/w~(k-1) = ((n-k+1)/(k-1)) * ((k+beta-2)/(n-k+alpha)),
  /// k in [2, n]. Independent of the log-Gamma tables.
  double adjacent_ratio(int k) const;

 private:
  int n_;
  double alpha_, beta_;
  std::vector<double> log_w_;        // size n, index k-1
  std::vector<double> log_w_tilde_;  // size n
  std::vector<double> log_q_;        // size n-1
  std::vector<double> card_probs_;   // size n-1
  double normalization_q_;
};

/// One row of the adjacent-weight diagnostic: both curves and their ratio.
struct AdjacentWeightRow {
  int k;  // 2..n
  double w_tilde_prev;
  double w_tilde;
  double ratio;
};

struct AdjacentWeightReport {
  int n;
  double alpha, beta;
  std::vector<AdjacentWeightRow> rows;
  double max_abs_gap;    // max_k |w~(k) - w~(k-1)|
  double max_w_tilde;    // max_k w~(k)
  double gap_ratio;      // max_abs_gap / max_w_tilde
  double w_tilde_first;  // w~(1)
  double w_tilde_last;   // w~(n)
};

AdjacentWeightReport adjacent_weight_report(const WeightScheme& ws);

// CSV with header `k,w_tilde_prev,w_tilde,ratio`.
void write_csv(const AdjacentWeightReport& report, std::ostream& os);

/// Draws coalitions from p(s): cardinality k from the scheme's
/// cardinality distribution, then a uniform k-subset. Always 0 < |s| < n.
/// Holds mutable random state; use one sampler per thread.
class SubsetSampler {
 public:
  SubsetSampler(const WeightScheme& ws, std::uint64_t seed);

  Coalition sample();

  /// Uniform k-subset of {0..n-1} minus {excluded} (pass -1 for none).
  Coalition sample_uniform_subset(int k, int excluded);

  Rng& rng() { return rng_; }

 private:
  const WeightScheme& ws_;
  Rng rng_;
  std::vector<double> card_cdf_;
};

}  // namespace wshap

#endif  // WSHAP_WEIGHTS_HPP
