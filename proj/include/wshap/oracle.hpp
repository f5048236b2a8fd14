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

#ifndef WSHAP_ORACLE_HPP
#define WSHAP_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "wshap/game.hpp"
#include "wshap/weights.hpp"

namespace wshap {

// Full-enumeration oracles are limited to this many players.
inline constexpr int kMaxExactPlayers = 20;

/// A length-n credit vector with provenance metadata.
struct Attribution {
  std::vector<double> values;
  std::vector<double> std_err;  // empty for exact methods
  std::string method;
  int n = 0;
  double alpha = 0.0, beta = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t n_samples = 0;  // 0 for exact

  double sum() const;
  void validate() const;  // finite values, length n
};

/// Exact Beta-weighted semivalue by full enumeration:
///   psi_i = sum_{s ni i} (w(|s|)/n) * (v(s) - v(s \ i)).
/// (w(k)/n equals w~(k) (k-1)!(n-k)!/n!.) Requires n <= 20.
Attribution exact_weighted_shapley(const Game& game, const WeightScheme& ws);

/// Exact solution of
///   min_psi sum_{0<|s|<n} q(|s|) (v(s) - v(0) - s^T psi)^2  s.t.  1^T psi = C
/// via the dense KKT system. Throws if the KKT residual exceeds 1e-10.
Attribution exact_constrained_wls(const Game& game, const WeightScheme& ws, double C);

/// Closed-form solution of the same constrained problem,
///   psi_i = C/n + D^{-1} sum_{s ni i} [ ((n-|s|)/n) q(|s|) v(s)
///                                       - ((|s|-1)/n) q(|s|-1) v(s\i) ],
///   D = sum_{k=1}^{n-1} C(n-2,k-1) q(k),
/// evaluated without any weight-flattening approximation. Agrees with
/// exact_constrained_wls to numerical precision.
Attribution extended_generalized_shapley(const Game& game, const WeightScheme& ws, double C);

/// Per-n gap between the constrained WLS solution (C = sum of the exact
/// semivalue) and the exact semivalue itself, for a seeded game family.
struct GapRow {
  int n;
  std::vector<double> gaps;  // one per seed, max-abs over players
  double median_gap;
};

struct GapReport {
  double alpha, beta;
  std::string family;
  std::vector<GapRow> rows;
};

GapReport approximation_gap(const std::function<Game(int, std::uint64_t)>& family,
                            const std::string& family_name, const std::vector<int>& ns,
                            const std::vector<std::uint64_t>& seeds, double alpha, double beta);

// CSV with header `n,gap` (median per n).
void write_csv(const GapReport& report, std::ostream& os);

/// Diagnostics of A = E_{p(s)}[s s^T]: closed-form entries, the numeric
/// minimum eigenvalue, both closed-form lambda_min candidates, and the
/// strong-convexity constants. lambda_* fields are at the scale of A; the
/// loss Hessian is 2A, so mu = 2 lambda_min(A) and sigma = 2/mu.
struct HessianReport {
  int n = 0;
  double alpha = 0.0, beta = 0.0;
  double a_diag = 0.0;              // A_ii = sum_k C(n-1,k-1) p_k
  double b_offdiag = 0.0;           // A_ij = sum_k C(n-2,k-2) p_k
  double lambda_min_numeric = 0.0;  // eigensolver on enumerated A (NaN if n > 20)
  double lambda_min_paper = 0.0;    // (1 - w~(n)) / Q
  double lambda_min_derived = 0.0;  // (n - w~(n)) / (n Q)
  double mu = 0.0;                  // 2 * lambda_min
  double sigma = 0.0;               // 2 / mu
};

HessianReport hessian_report(const WeightScheme& ws);

// CSV with header `n,alpha,beta,a,b,lambda_numeric,lambda_paper,lambda_derived,sigma`.
void write_csv(const std::vector<HessianReport>& reports, std::ostream& os);

}  // namespace wshap

#endif  // WSHAP_ORACLE_HPP
