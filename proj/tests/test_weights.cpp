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

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "wshap/stats.hpp"
#include "wshap/weights.hpp"

using namespace wshap;

TEST_CASE("shapley special case: w_tilde is flat at alpha=beta=1") {
  const WeightScheme ws(5, 1.0, 1.0);
  for (int k = 1; k <= 5; ++k) {
    CHECK(ws.w_tilde(k) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("n=3 alpha=2 beta=1 weights match the exact rationals") {
  const WeightScheme ws(3, 2.0, 1.0);
  CHECK(ws.w_tilde(1) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(ws.w_tilde(2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ws.w_tilde(3) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("alpha=beta=1 kernel reduces to the classical subset kernel") {
  const int n = 5;
  const WeightScheme ws(n, 1.0, 1.0);
  for (int k = 1; k <= n - 1; ++k) {
    const double classical =
        (n - 1.0) / (std::exp(log_choose(n, k)) * k * (n - k));
    CHECK(ws.q(k) == doctest::Approx(classical).epsilon(1e-12));
  }
}

TEST_CASE("shapley reduction of the cardinality distribution up to n=100") {
  for (int n : {6, 25, 100}) {
    const WeightScheme ws(n, 1.0, 1.0);
    const auto& p = ws.cardinality_distribution();
    double z = 0.0;
    for (int k = 1; k <= n - 1; ++k) z += 1.0 / (k * static_cast<double>(n - k));
    for (int k = 1; k <= n - 1; ++k) {
      CHECK(p[static_cast<std::size_t>(k - 1)] ==
            doctest::Approx(1.0 / (k * static_cast<double>(n - k)) / z).epsilon(1e-12));
    }
  }
}

TEST_CASE("cardinality distribution hand examples") {
  SUBCASE("n=4 shapley") {
    const WeightScheme ws(4, 1.0, 1.0);
    const auto& p = ws.cardinality_distribution();
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(4.0 / 11.0).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(3.0 / 11.0).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(4.0 / 11.0).epsilon(1e-12));
  }
  SUBCASE("n=3 alpha=2 beta=1") {
    const WeightScheme ws(3, 2.0, 1.0);
    const auto& p = ws.cardinality_distribution();
    REQUIRE(p.size() == 2);
    CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.4).epsilon(1e-12));
  }
}

TEST_CASE("normalization: sum w_tilde = n across the feasible set") {
  for (const auto& pair : FeasiblePair::feasible_set()) {
    for (int n : {3, 4, 5, 8, 16, 37, 100, 501, 2000}) {
      const WeightScheme ws(n, pair.alpha, pair.beta);
      double sum = 0.0;
      for (int k = 1; k <= n; ++k) sum += ws.w_tilde(k);
      CHECK(std::abs(sum - n) <= 1e-9 * n);
    }
  }
}

TEST_CASE("kernel consistency: q matches its definition") {
  for (const auto& pair : FeasiblePair::feasible_set()) {
    const int n = 23;
    const WeightScheme ws(n, pair.alpha, pair.beta);
    for (int k = 1; k <= n - 1; ++k) {
      const double direct =
          (n - 1.0) * ws.w_tilde(k) / (std::exp(log_choose(n, k)) * k * (n - k));
      CHECK(ws.q(k) == doctest::Approx(direct).epsilon(1e-9));
    }
  }
}

TEST_CASE("adjacent ratio closed form") {
  SUBCASE("n=100 k=50 alpha=16 beta=1 equals 51/66") {
    const WeightScheme ws(100, 16.0, 1.0);
    CHECK(ws.adjacent_ratio(50) == doctest::Approx(51.0 / 66.0).epsilon(1e-12));
  }
  SUBCASE("flat at alpha=beta=1") {
    const WeightScheme ws(10, 1.0, 1.0);
    for (int k = 2; k <= 10; ++k) CHECK(ws.adjacent_ratio(k) == doctest::Approx(1.0));
  }
  SUBCASE("beta=1 case reduces to (n-k+1)/((n+alpha-1)-k+1)") {
    const int n = 40;
    const double alpha = 8.0;
    const WeightScheme ws(n, alpha, 1.0);
    for (int k = 2; k <= n; ++k) {
      const double expected = (n - k + 1.0) / ((n + alpha - 1.0) - k + 1.0);
      CHECK(ws.adjacent_ratio(k) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("out of range throws") {
    const WeightScheme ws(6, 2.0, 1.0);
    CHECK_THROWS(ws.adjacent_ratio(1));
    CHECK_THROWS(ws.adjacent_ratio(7));
  }
}

TEST_CASE("ratio identity: closed form agrees with the log-gamma tables") {
  for (const auto& pair : FeasiblePair::feasible_set()) {
    for (int n : {3, 10, 64, 333, 2000}) {
      const WeightScheme ws(n, pair.alpha, pair.beta);
      for (int k = 2; k <= n; ++k) {
        const double table_ratio = std::exp(ws.log_w_tilde(k) - ws.log_w_tilde(k - 1));
        CHECK(std::abs(ws.adjacent_ratio(k) - table_ratio) <=
              1e-9 * std::max(1.0, std::abs(table_ratio)));
      }
    }
  }
}

TEST_CASE("monotone skew of w_tilde") {
  const int n = 50;
  SUBCASE("beta=1, alpha>1: non-increasing") {
    for (double alpha : {2.0, 4.0, 8.0, 16.0}) {
      const WeightScheme ws(n, alpha, 1.0);
      for (int k = 2; k <= n; ++k) CHECK(ws.w_tilde(k) <= ws.w_tilde(k - 1) + 1e-12);
    }
  }
  SUBCASE("alpha=1, beta>1: non-decreasing") {
    for (double beta : {2.0, 4.0, 8.0, 16.0}) {
      const WeightScheme ws(n, 1.0, beta);
      for (int k = 2; k <= n; ++k) CHECK(ws.w_tilde(k) >= ws.w_tilde(k - 1) - 1e-12);
    }
  }
}

TEST_CASE("tables stay finite at n = 1e5") {
  const WeightScheme ws(100000, 16.0, 1.0);
  CHECK(std::isfinite(ws.log_w_tilde(1)));
  CHECK(std::isfinite(ws.log_w_tilde(50000)));
  CHECK(std::isfinite(ws.log_w_tilde(100000)));
  CHECK(std::isfinite(ws.w_tilde(1)));
  CHECK(ws.w_tilde(1) > 0.0);
}

TEST_CASE("arbitrary positive weight pairs keep the scheme invariants") {
  // construction is not limited to the feasible set
  Rng rng(31337);
  for (int trial = 0; trial < 25; ++trial) {
    const double alpha = 0.1 + 20.0 * rng.uniform();
    const double beta = 0.1 + 20.0 * rng.uniform();
    const int n = 3 + rng.index(40);
    const WeightScheme ws(n, alpha, beta);
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) {
      CHECK(ws.w_tilde(k) > 0.0);
      sum += ws.w_tilde(k);
    }
    CHECK(std::abs(sum - n) <= 1e-9 * n);
    for (int k = 2; k <= n; ++k) {
      const double table_ratio = std::exp(ws.log_w_tilde(k) - ws.log_w_tilde(k - 1));
      CHECK(std::abs(ws.adjacent_ratio(k) - table_ratio) <=
            1e-9 * std::max(1.0, std::abs(table_ratio)));
    }
    double total = 0.0;
    for (double p : ws.cardinality_distribution()) total += p;
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(WeightScheme(1, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightScheme(5, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightScheme(5, 1.0, -2.0), std::invalid_argument);
  // a non-finite table entry names the offending k and weights
  try {
    WeightScheme ws(5, 1e308, 1.0);
    FAIL("expected a construction error");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("k=") != std::string::npos);
    CHECK(what.find("alpha=") != std::string::npos);
    CHECK(what.find("beta=") != std::string::npos);
  }
}

TEST_CASE("feasible set membership") {
  CHECK(FeasiblePair(16, 1).in_feasible_set());
  CHECK(FeasiblePair(1, 2).in_feasible_set());
  CHECK_FALSE(FeasiblePair(1, 1).in_feasible_set());
  CHECK_FALSE(FeasiblePair(3, 1).in_feasible_set());
  CHECK_THROWS(FeasiblePair(0.0, 1.0));
}

TEST_CASE("subset sampler: determinism and support") {
  const WeightScheme ws(9, 4.0, 1.0);
  SubsetSampler a(ws, 123), b(ws, 123), c(ws, 124);
  bool all_same = true, any_diff = false;
  for (int t = 0; t < 200; ++t) {
    const Coalition sa = a.sample();
    const Coalition sb = b.sample();
    const Coalition sc = c.sample();
    all_same = all_same && sa.bits() == sb.bits();
    any_diff = any_diff || sa.bits() != sc.bits();
    CHECK(sa.size() > 0);
    CHECK(sa.size() < 9);
  }
  CHECK(all_same);
  CHECK(any_diff);
}

TEST_CASE("subset sampler: n=2 always draws a singleton") {
  const WeightScheme ws(2, 1.0, 8.0);
  SubsetSampler sampler(ws, 7);
  for (int t = 0; t < 50; ++t) CHECK(sampler.sample().size() == 1);
}

TEST_CASE("sampler law: cardinality frequencies at 1e6 draws") {
  const int n = 12;
  const WeightScheme ws(n, 16.0, 1.0);
  SubsetSampler sampler(ws, 20260810);
  const std::uint64_t draws = 1000000;
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n - 1), 0);
  for (std::uint64_t t = 0; t < draws; ++t) {
    ++counts[static_cast<std::size_t>(sampler.sample().size() - 1)];
  }
  const auto& probs = ws.cardinality_distribution();

  // 3-sigma multinomial bounds per cardinality
  for (int k = 1; k <= n - 1; ++k) {
    const double p = probs[static_cast<std::size_t>(k - 1)];
    const double mean = p * static_cast<double>(draws);
    const double sd = std::sqrt(static_cast<double>(draws) * p * (1.0 - p));
    CHECK(std::abs(static_cast<double>(counts[static_cast<std::size_t>(k - 1)]) - mean) <=
          3.0 * sd);
  }

  // chi-square goodness of fit at significance 0.001
  const double stat = chi_square_statistic(counts, probs, static_cast<double>(draws));
  CHECK(stat <= chi_square_critical(n - 2, 0.001));
}

TEST_CASE("uniform subsets given cardinality are uniform") {
  // all 2-subsets of n=5 should be equally likely
  const WeightScheme ws(5, 1.0, 1.0);
  SubsetSampler sampler(ws, 99);
  std::map<std::uint64_t, int> counts;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    counts[sampler.sample_uniform_subset(2, -1).bits()]++;
  }
  REQUIRE(counts.size() == 10);
  for (const auto& [mask, count] : counts) {
    const double p = 1.0 / 10.0;
    const double sd = std::sqrt(draws * p * (1 - p));
    CHECK(std::abs(count - draws * p) <= 4.0 * sd);
  }
}

TEST_CASE("adjacent weight report") {
  SUBCASE("alpha=beta=1: all ratios exactly 1") {
    const auto rep = adjacent_weight_report(WeightScheme(10, 1.0, 1.0));
    for (const auto& row : rep.rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.gap_ratio <= 1e-9);
  }
  SUBCASE("n=100 alpha=1 beta=16: ratio starts at beta, decays toward 1") {
    const auto rep = adjacent_weight_report(WeightScheme(100, 1.0, 16.0));
    CHECK(rep.rows.front().k == 2);
    CHECK(rep.rows.front().ratio == doctest::Approx(16.0).epsilon(1e-12));
    double prev = rep.rows.front().ratio;
    for (const auto& row : rep.rows) {
      CHECK(row.ratio <= prev + 1e-12);
      CHECK(row.ratio >= 1.0);
      prev = row.ratio;
    }
    // past n/2 the ratio is already close to 1
    for (const auto& row : rep.rows) {
      if (row.k > 50) CHECK(row.ratio <= 1.31);
    }
  }
  SUBCASE("indistinguishable curves at n=500") {
    const auto rep = adjacent_weight_report(WeightScheme(500, 16.0, 1.0));
    CHECK(rep.gap_ratio < 0.05);
    const auto rep100 = adjacent_weight_report(WeightScheme(100, 16.0, 1.0));
    CHECK(rep.gap_ratio < rep100.gap_ratio);
  }
  SUBCASE("csv header and shape") {
    std::ostringstream os;
    write_csv(adjacent_weight_report(WeightScheme(6, 2.0, 1.0)), os);
    const std::string text = os.str();
    CHECK(text.rfind("k,w_tilde_prev,w_tilde,ratio\n", 0) == 0);
    int lines = 0;
    for (char ch : text) lines += ch == '\n';
    CHECK(lines == 6);  // header + k=2..6
  }
}

TEST_CASE("endpoint weights approach the larger of alpha and beta at one end") {
  // beta=1: weight concentrates at k=1 and w~(1) -> alpha; at the other
  // end w~(n) -> 0. The mirrored pair concentrates at k=n.
  const auto rep = adjacent_weight_report(WeightScheme(1000, 16.0, 1.0));
  CHECK(rep.w_tilde_first == doctest::Approx(16.0).epsilon(0.02));
  CHECK(rep.w_tilde_last < 1e-6);
  const auto rep2 = adjacent_weight_report(WeightScheme(1000, 1.0, 16.0));
  CHECK(rep2.w_tilde_last == doctest::Approx(16.0).epsilon(0.02));
  CHECK(rep2.w_tilde_first < 1e-6);
}
