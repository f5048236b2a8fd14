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

#include "wshap/oracle.hpp"

#include "wshap/stats.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace wshap {

double Attribution::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

void Attribution::validate() const {
  if (static_cast<int>(values.size()) != n) {
    throw std::invalid_argument("Attribution: length does not match n");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("Attribution: non-finite value");
  }
}

namespace {

void require_exact_size(const Game& game, const WeightScheme& ws) {
  if (game.players() != ws.players()) {
    throw std::invalid_argument("oracle: game and scheme disagree on n");
  }
  if (game.players() > kMaxExactPlayers) {
    throw std::invalid_argument("oracle: exact enumeration limited to n <= " +
                                std::to_string(kMaxExactPlayers));
  }
}

Attribution make_attribution(const WeightScheme& ws, std::string method) {
  Attribution a;
  a.n = ws.players();
  a.alpha = ws.alpha();
  a.beta = ws.beta();
  a.method = std::move(method);
  a.values.assign(static_cast<std::size_t>(ws.players()), 0.0);
  return a;
}

}  // namespace

Attribution exact_weighted_shapley(const Game& game, const WeightScheme& ws) {
  require_exact_size(game, ws);
  const int n = game.players();

  // Marginal coefficient for |s| = k is w~(k) (k-1)!(n-k)!/n! = w(k)/n,
  // evaluated in log space.
  std::vector<double> coef(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    coef[static_cast<std::size_t>(k - 1)] =
        std::exp(ws.log_w(k) - std::log(static_cast<double>(n)));
  }

  Attribution psi = make_attribution(ws, "exact");
  const std::uint64_t total = enumeration_count(n);
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    const int k = std::popcount(mask);
    const double c = coef[static_cast<std::size_t>(k - 1)];
    const double vs = game.value_mask(mask);
    for (std::uint64_t b = mask; b != 0; b &= b - 1) {
      const int i = std::countr_zero(b);
      psi.values[static_cast<std::size_t>(i)] +=
          c * (vs - game.value_mask(mask & ~(1ULL << i)));
    }
  }
  psi.validate();
  return psi;
}

Attribution exact_constrained_wls(const Game& game, const WeightScheme& ws, double C) {
  require_exact_size(game, ws);
  const int n = game.players();

  // Weights are taken as the per-subset sampling probabilities p_k, a
  // positive rescaling of q(k); the constrained minimizer is invariant to
  // the scale and the KKT system is better conditioned.
  std::vector<double> weight(static_cast<std::size_t>(n - 1));
  for (int k = 1; k <= n - 1; ++k) weight[static_cast<std::size_t>(k - 1)] = ws.subset_prob(k);

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
  const double v0 = game.value_mask(0);
  const std::uint64_t total = enumeration_count(n);
  std::vector<int> members;
  for (std::uint64_t mask = 1; mask + 1 < total; ++mask) {
    const int k = std::popcount(mask);
    const double wgt = weight[static_cast<std::size_t>(k - 1)];
    const double target = wgt * (game.value_mask(mask) - v0);
    members.clear();
    for (std::uint64_t b = mask; b != 0; b &= b - 1) members.push_back(std::countr_zero(b));
    for (int i : members) {
      for (int j : members) m(i, j) += wgt;
      r[i] += target;
    }
  }

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
  kkt.topLeftCorner(n, n) = 2.0 * m;
  kkt.topRightCorner(n, 1).setOnes();
  kkt.bottomLeftCorner(1, n).setOnes();
  Eigen::VectorXd rhs(n + 1);
  rhs.head(n) = 2.0 * r;
  rhs[n] = C;

  const Eigen::VectorXd sol = Eigen::FullPivLU<Eigen::MatrixXd>(kkt).solve(rhs);
  const double residual = (kkt * sol - rhs).cwiseAbs().maxCoeff();
  if (!sol.allFinite() || residual > 1e-10 * std::max(1.0, rhs.cwiseAbs().maxCoeff())) {
    throw std::runtime_error("exact_constrained_wls: KKT solve failed, residual = " +
                             std::to_string(residual));
  }

  Attribution psi = make_attribution(ws, "constrained-wls");
  for (int i = 0; i < n; ++i) psi.values[static_cast<std::size_t>(i)] = sol[i];
  psi.validate();
  return psi;
}

Attribution extended_generalized_shapley(const Game& game, const WeightScheme& ws, double C) {
  require_exact_size(game, ws);
  const int n = game.players();

  // Same positive rescaling of q as the WLS path; the closed form is a
  // ratio of terms linear in q, so it is scale-invariant.
  std::vector<double> q(static_cast<std::size_t>(n - 1));
  for (int k = 1; k <= n - 1; ++k) q[static_cast<std::size_t>(k - 1)] = ws.subset_prob(k);

  double denom = 0.0;
  for (int k = 1; k <= n - 1; ++k) {
    denom += std::exp(log_choose(n - 2, k - 1)) * q[static_cast<std::size_t>(k - 1)];
  }

  Attribution psi = make_attribution(ws, "extended-generalized");
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  const std::uint64_t total = enumeration_count(n);
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    const int k = std::popcount(mask);
    const double keep = k <= n - 1
                            ? (static_cast<double>(n - k) / n) * q[static_cast<std::size_t>(k - 1)] *
                                  game.value_mask(mask)
                            : 0.0;
    for (std::uint64_t b = mask; b != 0; b &= b - 1) {
      const int i = std::countr_zero(b);
      double term = keep;
      if (k >= 2) {
        term -= (static_cast<double>(k - 1) / n) * q[static_cast<std::size_t>(k - 2)] *
                game.value_mask(mask & ~(1ULL << i));
      }
      acc[static_cast<std::size_t>(i)] += term;
    }
  }
  for (int i = 0; i < n; ++i) {
    psi.values[static_cast<std::size_t>(i)] = C / n + acc[static_cast<std::size_t>(i)] / denom;
  }
  psi.validate();
  return psi;
}

GapReport approximation_gap(const std::function<Game(int, std::uint64_t)>& family,
                            const std::string& family_name, const std::vector<int>& ns,
                            const std::vector<std::uint64_t>& seeds, double alpha, double beta) {
  GapReport report;
  report.alpha = alpha;
  report.beta = beta;
  report.family = family_name;
  for (int n : ns) {
    const WeightScheme ws(n, alpha, beta);
    GapRow row;
    row.n = n;
    for (std::uint64_t seed : seeds) {
      Game game = family(n, seed);
      const Attribution exact = exact_weighted_shapley(game, ws);
      const Attribution wls = exact_constrained_wls(game, ws, exact.sum());
      double gap = 0.0;
      for (int i = 0; i < n; ++i) {
        gap = std::max(gap, std::abs(wls.values[static_cast<std::size_t>(i)] -
                                     exact.values[static_cast<std::size_t>(i)]));
      }
      row.gaps.push_back(gap);
    }
    row.median_gap = median(row.gaps);
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_csv(const GapReport& report, std::ostream& os) {
  os << "n,gap\n";
  char buf[64];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g\n", row.n, row.median_gap);
    os << buf;
  }
}

HessianReport hessian_report(const WeightScheme& ws) {
  const int n = ws.players();
  HessianReport rep;
  rep.n = n;
  rep.alpha = ws.alpha();
  rep.beta = ws.beta();

  // Closed-form entries of A. C(n-1,k-1) p_k = (k/n) P(|s|=k) and
  // C(n-2,k-2) p_k = (k(k-1)/(n(n-1))) P(|s|=k), so the sums reduce to
  // moments of the cardinality distribution and stay finite for any n.
  double a = 0.0, b = 0.0;
  const auto& card = ws.cardinality_distribution();
  for (int k = 1; k <= n - 1; ++k) {
    const double pk_card = card[static_cast<std::size_t>(k - 1)];
    a += pk_card * static_cast<double>(k) / n;
    b += pk_card * static_cast<double>(k) * (k - 1) / (static_cast<double>(n) * (n - 1));
  }
  rep.a_diag = a;
  rep.b_offdiag = b;

  const double q_norm = ws.normalization_q();
  const double wn = ws.w_tilde(n);
  rep.lambda_min_paper = (1.0 - wn) / q_norm;
  rep.lambda_min_derived = (n - wn) / (n * q_norm);

  if (n <= kMaxExactPlayers) {
    // Independent numeric route: accumulate E[s s^T] subset by subset and
    // take the smallest eigenvalue.
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(n, n);
    const std::uint64_t total = enumeration_count(n);
    std::vector<int> members;
    for (std::uint64_t mask = 1; mask + 1 < total; ++mask) {
      const int k = std::popcount(mask);
      const double pk = ws.subset_prob(k);
      members.clear();
      for (std::uint64_t bb = mask; bb != 0; bb &= bb - 1) members.push_back(std::countr_zero(bb));
      for (int i : members) {
        for (int j : members) mat(i, j) += pk;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mat);
    rep.lambda_min_numeric = eig.eigenvalues().minCoeff();
  } else {
    rep.lambda_min_numeric = std::numeric_limits<double>::quiet_NaN();
  }

  const double lam = n <= kMaxExactPlayers ? rep.lambda_min_numeric : rep.lambda_min_derived;
  rep.mu = 2.0 * lam;
  rep.sigma = 2.0 / rep.mu;
  return rep;
}

void write_csv(const std::vector<HessianReport>& reports, std::ostream& os) {
  os << "n,alpha,beta,a,b,lambda_numeric,lambda_paper,lambda_derived,sigma\n";
  char buf[256];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n,
                  r.alpha, r.beta, r.a_diag, r.b_offdiag, r.lambda_min_numeric,
                  r.lambda_min_paper, r.lambda_min_derived, r.sigma);
    os << buf;
  }
}

}  // namespace wshap
