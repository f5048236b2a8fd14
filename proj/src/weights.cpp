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

#include "wshap/weights.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wshap {

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

FeasiblePair::FeasiblePair(double a, double b) : alpha(a), beta(b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("FeasiblePair: alpha and beta must be positive");
  }
}

const std::vector<FeasiblePair>& FeasiblePair::feasible_set() {
  static const std::vector<FeasiblePair> kSet = {
      {1, 16}, {1, 8}, {1, 4}, {1, 2}, {2, 1}, {4, 1}, {8, 1}, {16, 1}};
  return kSet;
}

bool FeasiblePair::in_feasible_set() const {
  for (const auto& p : feasible_set()) {
    if (p.alpha == alpha && p.beta == beta) return true;
  }
  return false;
}

namespace {

void require_finite(double value, const char* table, int k, double alpha, double beta) {
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "WeightScheme: non-finite " << table << " entry at k=" << k << " (alpha=" << alpha
        << ", beta=" << beta << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

WeightScheme::WeightScheme(int n, double alpha, double beta)
    : n_(n), alpha_(alpha), beta_(beta) {
  if (n < 2) throw std::invalid_argument("WeightScheme: n must be >= 2");
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("WeightScheme: alpha and beta must be positive");
  }

  log_w_.resize(static_cast<std::size_t>(n));
  log_w_tilde_.resize(static_cast<std::size_t>(n));
  const double lbeta_ab = log_beta(alpha, beta);
  const double log_n = std::log(static_cast<double>(n));
  for (int k = 1; k <= n; ++k) {
    const double lw = log_n + log_beta(k + beta - 1.0, n - k + alpha) - lbeta_ab;
    const double lwt = log_choose(n - 1.0, k - 1.0) + lw;
    require_finite(lw, "log_w", k, alpha, beta);
    require_finite(lwt, "log_w_tilde", k, alpha, beta);
    log_w_[static_cast<std::size_t>(k - 1)] = lw;
    log_w_tilde_[static_cast<std::size_t>(k - 1)] = lwt;
  }

  // Normalization check: (1/n) sum_k w~(k) = 1. Summed against the max
  // log to avoid spurious under/overflow.
  const double max_lwt = *std::max_element(log_w_tilde_.begin(), log_w_tilde_.end());
  double scaled_sum = 0.0;
  for (double lwt : log_w_tilde_) scaled_sum += std::exp(lwt - max_lwt);
  const double sum_w_tilde = std::exp(max_lwt) * scaled_sum;
  require_finite(sum_w_tilde, "sum of w_tilde", n, alpha, beta);
  if (std::abs(sum_w_tilde - n) > 1e-9 * n) {
    std::ostringstream msg;
    msg << "WeightScheme: normalization failed, sum w_tilde = " << sum_w_tilde << " for n=" << n
        << " (alpha=" << alpha << ", beta=" << beta << ")";
    throw std::invalid_argument(msg.str());
  }

  log_q_.resize(static_cast<std::size_t>(n - 1));
  card_probs_.resize(static_cast<std::size_t>(n - 1));
  const double log_nm1 = std::log(static_cast<double>(n - 1));
  for (int k = 1; k <= n - 1; ++k) {
    const double lq = log_nm1 + log_w_tilde_[static_cast<std::size_t>(k - 1)] -
                      log_choose(n, k) - std::log(static_cast<double>(k)) -
                      std::log(static_cast<double>(n - k));
    require_finite(lq, "log_q", k, alpha, beta);
    log_q_[static_cast<std::size_t>(k - 1)] = lq;
  }

  // P(|s|=k) proportional to w~(k)/(k(n-k)); normalized in linear space
  // after shifting by the max log.
  std::vector<double> log_unnorm(static_cast<std::size_t>(n - 1));
  for (int k = 1; k <= n - 1; ++k) {
    log_unnorm[static_cast<std::size_t>(k - 1)] =
        log_w_tilde_[static_cast<std::size_t>(k - 1)] - std::log(static_cast<double>(k)) -
        std::log(static_cast<double>(n - k));
  }
  const double max_lu = *std::max_element(log_unnorm.begin(), log_unnorm.end());
  double total = 0.0;
  for (std::size_t i = 0; i < log_unnorm.size(); ++i) {
    card_probs_[i] = std::exp(log_unnorm[i] - max_lu);
    total += card_probs_[i];
  }
  for (double& p : card_probs_) p /= total;

  // Q = (n-1) * sum_k w~(k)/(k(n-k)) = (n-1) * exp(max_lu) * total.
  normalization_q_ = (n - 1) * std::exp(max_lu) * total;
  require_finite(normalization_q_, "Q", n, alpha, beta);
}

double WeightScheme::log_w(int k) const {
  if (k < 1 || k > n_) throw std::out_of_range("WeightScheme::log_w: k out of [1,n]");
  return log_w_[static_cast<std::size_t>(k - 1)];
}

double WeightScheme::log_w_tilde(int k) const {
  if (k < 1 || k > n_) throw std::out_of_range("WeightScheme::log_w_tilde: k out of [1,n]");
  return log_w_tilde_[static_cast<std::size_t>(k - 1)];
}

double WeightScheme::log_q(int k) const {
  if (k < 1 || k > n_ - 1) throw std::out_of_range("WeightScheme::log_q: k out of [1,n-1]");
  return log_q_[static_cast<std::size_t>(k - 1)];
}

double WeightScheme::w(int k) const { return std::exp(log_w(k)); }
double WeightScheme::w_tilde(int k) const { return std::exp(log_w_tilde(k)); }
double WeightScheme::q(int k) const { return std::exp(log_q(k)); }

double WeightScheme::subset_prob(int k) const {
  if (k < 1 || k > n_ - 1) throw std::out_of_range("WeightScheme::subset_prob: k out of [1,n-1]");
  return card_probs_[static_cast<std::size_t>(k - 1)] * std::exp(-log_choose(n_, k));
}

double WeightScheme::adjacent_ratio(int k) const {
  if (k < 2 || k > n_) throw std::out_of_range("WeightScheme::adjacent_ratio: k out of [2,n]");
  const double n = n_;
  return ((n - k + 1.0) / (k - 1.0)) * ((k + beta_ - 2.0) / (n - k + alpha_));
}

AdjacentWeightReport adjacent_weight_report(const WeightScheme& ws) {
  AdjacentWeightReport rep;
  rep.n = ws.players();
  rep.alpha = ws.alpha();
  rep.beta = ws.beta();
  rep.max_abs_gap = 0.0;
  rep.max_w_tilde = ws.w_tilde(1);
  rep.rows.reserve(static_cast<std::size_t>(ws.players() - 1));
  for (int k = 2; k <= ws.players(); ++k) {
    AdjacentWeightRow row;
    row.k = k;
    row.w_tilde_prev = ws.w_tilde(k - 1);
    row.w_tilde = ws.w_tilde(k);
    row.ratio = ws.adjacent_ratio(k);
    rep.rows.push_back(row);
    rep.max_abs_gap = std::max(rep.max_abs_gap, std::abs(row.w_tilde - row.w_tilde_prev));
    rep.max_w_tilde = std::max(rep.max_w_tilde, row.w_tilde);
  }
  rep.gap_ratio = rep.max_abs_gap / rep.max_w_tilde;
  rep.w_tilde_first = ws.w_tilde(1);
  rep.w_tilde_last = ws.w_tilde(ws.players());
  return rep;
}

void write_csv(const AdjacentWeightReport& report, std::ostream& os) {
  os << "k,w_tilde_prev,w_tilde,ratio\n";
  char buf[160];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", row.k, row.w_tilde_prev,
                  row.w_tilde, row.ratio);
    os << buf;
  }
}

SubsetSampler::SubsetSampler(const WeightScheme& ws, std::uint64_t seed)
    : ws_(ws), rng_(seed) {
  if (ws.players() > kMaxCoalitionPlayers) {
    throw std::invalid_argument("SubsetSampler: coalition sampling limited to n <= 64");
  }
  const auto& probs = ws.cardinality_distribution();
  card_cdf_.resize(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    card_cdf_[i] = acc;
  }
  card_cdf_.back() = 1.0;
}

Coalition SubsetSampler::sample_uniform_subset(int k, int excluded) {
  const int n = ws_.players();
  const int pool = excluded >= 0 ? n - 1 : n;
  if (k < 0 || k > pool) throw std::invalid_argument("sample_uniform_subset: bad k");
  // Floyd's algorithm over a virtual pool of `pool` indices.
  std::uint64_t bits = 0;
  auto real_index = [&](int v) {
    if (excluded >= 0 && v >= excluded) return v + 1;
    return v;
  };
  for (int j = pool - k; j < pool; ++j) {
    const int t = rng_.index(j + 1);
    const std::uint64_t bit_t = 1ULL << real_index(t);
    if (bits & bit_t) {
      bits |= 1ULL << real_index(j);
    } else {
      bits |= bit_t;
    }
  }
  return Coalition(bits, n);
}

Coalition SubsetSampler::sample() {
  const double u = rng_.uniform();
  const auto it = std::upper_bound(card_cdf_.begin(), card_cdf_.end(), u);
  const int k = static_cast<int>(it - card_cdf_.begin()) + 1;  // cardinality, 1..n-1
  return sample_uniform_subset(std::min(k, ws_.players() - 1), -1);
}

}  // namespace wshap
