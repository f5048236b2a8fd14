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

#ifndef WSHAP_STATS_HPP
#define WSHAP_STATS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wshap {

inline double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median: empty");
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size();
  return m % 2 == 1 ? xs[m / 2] : 0.5 * (xs[m / 2 - 1] + xs[m / 2]);
}

// Chi-square upper quantile via the Wilson-Hilferty cube approximation;
// within ~0.2% of exact for df >= 3, plenty for goodness-of-fit gates.
inline double chi_square_critical(int df, double significance) {
  if (df < 1) throw std::invalid_argument("chi_square_critical: df must be >= 1");
  double z;
  if (significance == 0.001) {
    z = 3.0902323061678132;
  } else if (significance == 0.01) {
    z = 2.3263478740408408;
  } else if (significance == 0.05) {
    z = 1.6448536269514722;
  } else {
    throw std::invalid_argument("chi_square_critical: unsupported significance level");
  }
  const double t = 2.0 / (9.0 * df);
  const double c = 1.0 - t + z * std::sqrt(t);
  return df * c * c * c;
}

inline double chi_square_statistic(const std::vector<std::uint64_t>& observed,
                                   const std::vector<double>& probs, double total) {
  if (observed.size() != probs.size()) {
    throw std::invalid_argument("chi_square_statistic: size mismatch");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = probs[i] * total;
    const double diff = static_cast<double>(observed[i]) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

}  // namespace wshap

#endif  // WSHAP_STATS_HPP
