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

#ifndef WSHAP_EVALUATION_HPP
#define WSHAP_EVALUATION_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wshap/dataset.hpp"
#include "wshap/oracle.hpp"
#include "wshap/surrogate.hpp"
#include "wshap/weights.hpp"

namespace wshap {

struct CurvePoint {
  double x;
  double y;
};

/// A curve plus its trapezoidal AUC; x strictly increasing in [0,1].
struct EvalReport {
  std::string task;
  std::vector<CurvePoint> curve;
  double auc = 0.0;
  std::map<std::string, double> config;  // echoed scalar settings
};

double trapezoid_auc(const std::vector<CurvePoint>& curve);

enum class ValuatorKind { kExact, kMonteCarlo, kRegression, kAmortized, kRandom };

ValuatorKind parse_valuator(const std::string& name);
std::string valuator_name(ValuatorKind kind);

struct NoisyLabelConfig {
  double flip_fraction = 0.2;
  int k_neighbors = 5;
  ValuatorKind valuator = ValuatorKind::kMonteCarlo;
  std::uint64_t n_samples = 20000;  // budget for sampled valuators
  std::uint64_t seed = 0;
  // amortized-valuator training settings
  int amortized_steps = 1500;
  int amortized_batch_size = 10;
  double amortized_lr = 0.002;
};

/// Flips a seeded fraction of train labels, values every train point with
/// the chosen valuator on the KNN game, ranks ascending, and reports the
/// detection curve (fraction inspected -> fraction of flips found) with
/// its AUC. The exact valuator requires n <= 20 train points.
EvalReport eval_noisy_labels(const LabeledDataset& data, const WeightScheme& ws,
                             const NoisyLabelConfig& cfg);

/// Detection curve for externally supplied values (ascending ranking).
EvalReport detection_report(const std::vector<double>& values, const std::vector<bool>& flipped);

/// Accuracy-vs-included-features curve: for each inclusion level j, the
/// top-j features per instance (by attribution, ties by index) are
/// unmasked and top-1 accuracy is scored through the surrogate.
/// `attributions` has one length-d entry per instance row.
EvalReport eval_inclusion_auc(const Eigen::MatrixXd& instances, const std::vector<int>& labels,
                              const std::vector<std::vector<double>>& attributions,
                              const SurrogateModel& surrogate);

}  // namespace wshap

#endif  // WSHAP_EVALUATION_HPP
