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

#include "wshap/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "wshap/amortized.hpp"
#include "wshap/estimators.hpp"
#include "wshap/knn_game.hpp"

namespace wshap {

double trapezoid_auc(const std::vector<CurvePoint>& curve) {
  if (curve.size() < 2) throw std::invalid_argument("trapezoid_auc: need >= 2 points");
  double auc = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double dx = curve[i].x - curve[i - 1].x;
    if (dx <= 0.0) throw std::invalid_argument("trapezoid_auc: x must be strictly increasing");
    auc += 0.5 * dx * (curve[i].y + curve[i - 1].y);
  }
  return auc;
}

ValuatorKind parse_valuator(const std::string& name) {
  if (name == "exact") return ValuatorKind::kExact;
  if (name == "mc") return ValuatorKind::kMonteCarlo;
  if (name == "wls") return ValuatorKind::kRegression;
  if (name == "amortized") return ValuatorKind::kAmortized;
  if (name == "random") return ValuatorKind::kRandom;
  throw std::invalid_argument("unknown valuator: " + name);
}

std::string valuator_name(ValuatorKind kind) {
  switch (kind) {
    case ValuatorKind::kExact: return "exact";
    case ValuatorKind::kMonteCarlo: return "mc";
    case ValuatorKind::kRegression: return "wls";
    case ValuatorKind::kAmortized: return "amortized";
    case ValuatorKind::kRandom: return "random";
  }
  throw std::invalid_argument("bad valuator kind");
}

EvalReport detection_report(const std::vector<double>& values, const std::vector<bool>& flipped) {
  if (values.size() != flipped.size() || values.empty()) {
    throw std::invalid_argument("detection_report: size mismatch");
  }
  const int m = static_cast<int>(values.size());
  const int total_flips = static_cast<int>(std::count(flipped.begin(), flipped.end(), true));
  if (total_flips == 0) throw std::invalid_argument("detection_report: nothing to detect");

  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)];
  });

  EvalReport report;
  report.task = "noisy-labels";
  report.curve.reserve(static_cast<std::size_t>(m + 1));
  report.curve.push_back({0.0, 0.0});
  int found = 0;
  for (int i = 0; i < m; ++i) {
    if (flipped[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]) ++found;
    report.curve.push_back({static_cast<double>(i + 1) / m,
                            static_cast<double>(found) / total_flips});
  }
  report.auc = trapezoid_auc(report.curve);
  return report;
}

namespace {

std::vector<double> amortized_values(const LabeledDataset& flipped_data, const WeightScheme& ws,
                                     const NoisyLabelConfig& cfg) {
  const auto train_rows = flipped_data.train_indices();
  const auto val_rows = flipped_data.val_indices();

  AttentionTaskConfig task;
  task.batch_size = cfg.amortized_batch_size;
  task.k_neighbors = cfg.k_neighbors;
  task.seed = cfg.seed;
  AttentionHeadModel model = build_attention_task(flipped_data, task);
  const WeightScheme batch_ws(model.players(), ws.alpha(), ws.beta());

  TrainConfig tc;
  tc.steps = cfg.amortized_steps;
  tc.batch_instances = 2;
  tc.subsets_per_instance = 8;
  tc.lr = cfg.amortized_lr;
  tc.constraint_source = TrainConfig::ConstraintSource::kNone;
  tc.seed = cfg.seed;
  train(model, batch_ws, tc);

  // One forward pass over the full train set; no game evaluations.
  std::vector<int> train_y, val_y;
  for (int row : train_rows) train_y.push_back(flipped_data.labels[static_cast<std::size_t>(row)]);
  for (int row : val_rows) val_y.push_back(flipped_data.labels[static_cast<std::size_t>(row)]);
  const Eigen::VectorXd est = model.value_batch(encode_points(flipped_data, train_rows), train_y,
                                                encode_points(flipped_data, val_rows), val_y);
  return {est.data(), est.data() + est.size()};
}

}  // namespace

EvalReport eval_noisy_labels(const LabeledDataset& data, const WeightScheme& ws,
                             const NoisyLabelConfig& cfg) {
  data.validate();
  LabeledDataset flipped_data = data;
  const std::vector<int> flipped_rows =
      flip_train_labels(flipped_data, cfg.flip_fraction, splitmix64(cfg.seed ^ 0xf11bULL));

  const auto train = flipped_data.train_indices();
  const int n = static_cast<int>(train.size());
  if (n != ws.players()) {
    throw std::invalid_argument("eval_noisy_labels: scheme n must equal train size");
  }

  std::vector<double> values;
  switch (cfg.valuator) {
    case ValuatorKind::kExact: {
      if (n > kMaxExactPlayers) {
        throw std::invalid_argument("eval_noisy_labels: exact valuator requires n <= 20");
      }
      Game game = knn_value_game(flipped_data, cfg.k_neighbors);
      values = exact_weighted_shapley(game, ws).values;
      break;
    }
    case ValuatorKind::kMonteCarlo: {
      Game game = knn_value_game(flipped_data, cfg.k_neighbors);
      EstimatorConfig ec;
      ec.n_samples = cfg.n_samples;
      ec.seed = splitmix64(cfg.seed ^ 0x3cULL);
      values = monte_carlo_semivalue(game, ws, ec).values;
      break;
    }
    case ValuatorKind::kRegression: {
      Game game = knn_value_game(flipped_data, cfg.k_neighbors);
      EstimatorConfig ec;
      ec.n_samples = cfg.n_samples;
      ec.seed = splitmix64(cfg.seed ^ 0x3cULL);
      values = regression_estimate(game, ws, ec).values;
      break;
    }
    case ValuatorKind::kAmortized: {
      values = amortized_values(flipped_data, ws, cfg);
      break;
    }
    case ValuatorKind::kRandom: {
      Rng rng(splitmix64(cfg.seed ^ 0x7a2dULL));
      values.resize(static_cast<std::size_t>(n));
      for (double& v : values) v = rng.uniform();
      break;
    }
  }

  std::vector<bool> flipped(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    flipped[static_cast<std::size_t>(i)] =
        std::binary_search(flipped_rows.begin(), flipped_rows.end(), train[static_cast<std::size_t>(i)]);
  }

  EvalReport report = detection_report(values, flipped);
  report.config["alpha"] = ws.alpha();
  report.config["beta"] = ws.beta();
  report.config["k_neighbors"] = cfg.k_neighbors;
  report.config["flip_fraction"] = cfg.flip_fraction;
  report.config["seed"] = static_cast<double>(cfg.seed);
  report.config["n_samples"] = static_cast<double>(cfg.n_samples);
  report.config["valuator"] = static_cast<double>(static_cast<int>(cfg.valuator));
  return report;
}

EvalReport eval_inclusion_auc(const Eigen::MatrixXd& instances, const std::vector<int>& labels,
                              const std::vector<std::vector<double>>& attributions,
                              const SurrogateModel& surrogate) {
  const int m = static_cast<int>(instances.rows());
  const int d = static_cast<int>(instances.cols());
  if (m == 0) throw std::invalid_argument("eval_inclusion_auc: no instances");
  if (static_cast<int>(labels.size()) != m ||
      static_cast<int>(attributions.size()) != m) {
    throw std::invalid_argument("eval_inclusion_auc: attribution/instance count mismatch");
  }
  if (d != surrogate.feature_dim()) {
    throw std::invalid_argument("eval_inclusion_auc: feature dim mismatch");
  }
  for (const auto& a : attributions) {
    if (static_cast<int>(a.size()) != d) {
      throw std::invalid_argument("eval_inclusion_auc: attribution length != d");
    }
  }

  // Per instance: features sorted by descending attribution, ties by index.
  std::vector<std::vector<int>> order(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto& ord = order[static_cast<std::size_t>(i)];
    ord.resize(static_cast<std::size_t>(d));
    std::iota(ord.begin(), ord.end(), 0);
    const auto& a = attributions[static_cast<std::size_t>(i)];
    std::stable_sort(ord.begin(), ord.end(), [&](int x, int y) {
      return a[static_cast<std::size_t>(x)] > a[static_cast<std::size_t>(y)];
    });
  }

  EvalReport report;
  report.task = "inclusion";
  for (int j = 0; j <= d; ++j) {
    int correct = 0;
    for (int i = 0; i < m; ++i) {
      std::uint64_t mask = 0;
      for (int t = 0; t < j; ++t) {
        mask |= 1ULL << order[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
      }
      const Eigen::VectorXd p = surrogate.predict_proba_mask(instances.row(i).transpose(), mask);
      Eigen::Index pred;
      p.maxCoeff(&pred);  // first maximum -> smallest class index on ties
      if (static_cast<int>(pred) == labels[static_cast<std::size_t>(i)]) ++correct;
    }
    report.curve.push_back({static_cast<double>(j) / d, static_cast<double>(correct) / m});
  }
  report.auc = trapezoid_auc(report.curve);
  return report;
}

}  // namespace wshap
