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

#include "wshap/amortized.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "wshap/estimators.hpp"
#include "wshap/knn_game.hpp"

namespace wshap {

MlpHeadModel::MlpHeadModel(Mlp net, std::vector<Instance> instances)
    : net_(std::move(net)), instances_(std::move(instances)) {
  if (instances_.empty()) throw std::invalid_argument("MlpHeadModel: no instances");
  for (const auto& inst : instances_) {
    if (inst.game.players() != net_.output_dim()) {
      throw std::invalid_argument("MlpHeadModel: game players != net output dim");
    }
    if (inst.input.size() != net_.input_dim()) {
      throw std::invalid_argument("MlpHeadModel: instance input dim mismatch");
    }
  }
  traces_.resize(instances_.size());
}

MlpHeadModel MlpHeadModel::randomized(int input_dim, int hidden, int players,
                                      std::vector<Instance> instances, double scale, Rng& rng) {
  return MlpHeadModel(Mlp::randomized({input_dim, hidden, hidden, players}, scale, rng),
                      std::move(instances));
}

MlpHeadModel MlpHeadModel::teacher_forced(int input_dim, int hidden,
                                          const std::vector<double>& values,
                                          std::vector<Instance> instances) {
  Mlp net({input_dim, hidden, hidden, static_cast<int>(values.size())});
  auto& last = net.layers().back();
  for (std::size_t i = 0; i < values.size(); ++i) {
    last.b[static_cast<Eigen::Index>(i)] = values[i];
  }
  return MlpHeadModel(std::move(net), std::move(instances));
}

const Game& MlpHeadModel::game(int instance) const {
  return instances_[static_cast<std::size_t>(instance)].game;
}

Eigen::VectorXd MlpHeadModel::forward(int instance) const {
  return net_.forward(instances_[static_cast<std::size_t>(instance)].input);
}

Eigen::VectorXd MlpHeadModel::forward_train(int instance) {
  return net_.forward(instances_[static_cast<std::size_t>(instance)].input,
                      &traces_[static_cast<std::size_t>(instance)]);
}

void MlpHeadModel::backward(int instance, const Eigen::VectorXd& grad_psi) {
  net_.backward(traces_[static_cast<std::size_t>(instance)], grad_psi);
}

AttentionHeadModel::AttentionHeadModel(AttentionValuator net, std::vector<Instance> instances)
    : net_(std::move(net)), instances_(std::move(instances)) {
  if (instances_.empty()) throw std::invalid_argument("AttentionHeadModel: no instances");
  for (const auto& inst : instances_) {
    if (inst.game.players() != static_cast<int>(inst.train_in.rows())) {
      throw std::invalid_argument("AttentionHeadModel: game players != train batch size");
    }
  }
  traces_.resize(instances_.size());
}

int AttentionHeadModel::players() const {
  return static_cast<int>(instances_.front().train_in.rows());
}

const Game& AttentionHeadModel::game(int instance) const {
  return instances_[static_cast<std::size_t>(instance)].game;
}

Eigen::VectorXd AttentionHeadModel::forward(int instance) const {
  const auto& inst = instances_[static_cast<std::size_t>(instance)];
  return net_.forward(inst.train_in, inst.train_y, inst.val_in, inst.val_y);
}

Eigen::VectorXd AttentionHeadModel::forward_train(int instance) {
  const auto& inst = instances_[static_cast<std::size_t>(instance)];
  return net_.forward(inst.train_in, inst.train_y, inst.val_in, inst.val_y,
                      &traces_[static_cast<std::size_t>(instance)]);
}

void AttentionHeadModel::backward(int instance, const Eigen::VectorXd& grad_psi) {
  net_.backward(traces_[static_cast<std::size_t>(instance)], grad_psi);
}

Eigen::VectorXd AttentionHeadModel::value_batch(const Eigen::MatrixXd& train_in,
                                                const std::vector<int>& train_y,
                                                const Eigen::MatrixXd& val_in,
                                                const std::vector<int>& val_y) const {
  return net_.forward(train_in, train_y, val_in, val_y);
}

Eigen::MatrixXd encode_points(const LabeledDataset& data, const std::vector<int>& rows) {
  const int d = data.dim();
  const int K = data.num_classes();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), d + K);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.block(static_cast<Eigen::Index>(r), 0, 1, d) = data.features.row(rows[r]);
    out(static_cast<Eigen::Index>(r), d + data.class_index(data.labels[static_cast<std::size_t>(rows[r])])) = 1.0;
  }
  return out;
}

AttentionHeadModel build_attention_task(const LabeledDataset& data,
                                        const AttentionTaskConfig& cfg) {
  data.validate();
  const auto train = data.train_indices();
  const auto val = data.val_indices();
  const int batch = std::min<int>(cfg.batch_size, static_cast<int>(train.size()));
  const int val_batch = std::min<int>(cfg.val_batch, static_cast<int>(val.size()));

  Rng rng(splitmix64(cfg.seed ^ 0xa77e0ULL));
  std::vector<AttentionHeadModel::Instance> instances;
  for (int z = 0; z < cfg.num_instances; ++z) {
    std::vector<int> tr = train, vl = val;
    std::vector<int> tsel, vsel;
    for (int i = 0; i < batch; ++i) {
      const int p = rng.index(static_cast<int>(tr.size()));
      tsel.push_back(tr[static_cast<std::size_t>(p)]);
      tr.erase(tr.begin() + p);
    }
    for (int i = 0; i < val_batch; ++i) {
      const int p = rng.index(static_cast<int>(vl.size()));
      vsel.push_back(vl[static_cast<std::size_t>(p)]);
      vl.erase(vl.begin() + p);
    }
    // KNN game whose players are exactly the selected train rows.
    LabeledDataset sub;
    std::vector<int> rows = tsel;
    rows.insert(rows.end(), vsel.begin(), vsel.end());
    sub.features.resize(static_cast<Eigen::Index>(rows.size()), data.dim());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      sub.features.row(static_cast<Eigen::Index>(r)) = data.features.row(rows[r]);
      sub.labels.push_back(data.labels[static_cast<std::size_t>(rows[r])]);
      sub.split.push_back(r < tsel.size() ? Split::kTrain : Split::kVal);
    }
    AttentionHeadModel::Instance inst{encode_points(data, tsel),
                                      {},
                                      encode_points(data, vsel),
                                      {},
                                      knn_value_game(sub, std::min(cfg.k_neighbors, batch))};
    for (int row : tsel) inst.train_y.push_back(data.labels[static_cast<std::size_t>(row)]);
    for (int row : vsel) inst.val_y.push_back(data.labels[static_cast<std::size_t>(row)]);
    instances.push_back(std::move(inst));
  }

  const int input_dim = data.dim() + data.num_classes();
  Rng init_rng(splitmix64(cfg.seed ^ 0x1717ULL));
  AttentionValuator net =
      AttentionValuator::randomized(input_dim, cfg.hidden, cfg.key_dim, cfg.init_scale, init_rng);
  return AttentionHeadModel(std::move(net), std::move(instances));
}

void TrainConfig::validate() const {
  if (steps < 1 || batch_instances < 1 || subsets_per_instance < 1) {
    throw std::invalid_argument("TrainConfig: steps/batch/subsets must be positive");
  }
  if (!(lr > 0.0)) throw std::invalid_argument("TrainConfig: lr must be positive");
  if (gamma < 0.0) throw std::invalid_argument("TrainConfig: gamma must be >= 0");
}

TrainResult train(AmortizedModel& model, const WeightScheme& ws, const TrainConfig& cfg) {
  cfg.validate();
  const int n = model.players();
  if (n != ws.players()) throw std::invalid_argument("train: model and scheme disagree on n");

  TrainResult result;
  result.constraint_constants.resize(static_cast<std::size_t>(model.num_instances()), 0.0);
  if (cfg.constraint_source == TrainConfig::ConstraintSource::kOracle) {
    for (int z = 0; z < model.num_instances(); ++z) {
      result.constraint_constants[static_cast<std::size_t>(z)] =
          exact_weighted_shapley(model.game(z), ws).sum();
    }
  } else if (cfg.constraint_source == TrainConfig::ConstraintSource::kMcEstimate) {
    for (int z = 0; z < model.num_instances(); ++z) {
      EstimatorConfig ec;
      ec.n_samples = cfg.mc_constraint_samples;
      ec.seed = splitmix64(cfg.seed ^ static_cast<std::uint64_t>(z));
      result.constraint_constants[static_cast<std::size_t>(z)] =
          estimate_sum_constant(model.game(z), ws, ec).value;
    }
  }
  const bool use_reg =
      cfg.gamma > 0.0 && cfg.constraint_source != TrainConfig::ConstraintSource::kNone;

  SubsetSampler sampler(ws, splitmix64(cfg.seed) ^ 0x5eedULL);
  Rng picker(cfg.seed);
  result.trace.reserve(static_cast<std::size_t>(cfg.steps));

  for (int step = 0; step < cfg.steps; ++step) {
    model.zero_grad();
    double data_loss = 0.0;
    double reg_loss = 0.0;
    const double inv_batch = 1.0 / cfg.batch_instances;
    for (int bi = 0; bi < cfg.batch_instances; ++bi) {
      const int z = model.num_instances() == 1 ? 0 : picker.index(model.num_instances());
      const Game& game = model.game(z);
      const double v0 = game.value(Coalition::empty(n));
      const Eigen::VectorXd psi = model.forward_train(z);

      Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
      double inst_loss = 0.0;
      for (int t = 0; t < cfg.subsets_per_instance; ++t) {
        const Coalition s = sampler.sample();
        double pred = 0.0;
        for (int i : s.members()) pred += psi[i];
        const double residual = pred - (game.value(s) - v0);
        inst_loss += residual * residual;
        for (int i : s.members()) grad[i] += 2.0 * residual;
      }
      inst_loss /= cfg.subsets_per_instance;
      grad /= static_cast<double>(cfg.subsets_per_instance);

      if (use_reg) {
        const double gap = psi.sum() - result.constraint_constants[static_cast<std::size_t>(z)];
        reg_loss += cfg.gamma * gap * gap * inv_batch;
        grad.array() += 2.0 * cfg.gamma * gap;
      }
      data_loss += inst_loss * inv_batch;
      model.backward(z, grad * inv_batch);
    }
    if (!std::isfinite(data_loss) || !std::isfinite(reg_loss)) {
      throw TrainingDivergedError(
          "train: non-finite loss at step " + std::to_string(step) + " (seed " +
              std::to_string(cfg.seed) + ")",
          step);
    }
    model.sgd_step(cfg.lr);
    result.trace.push_back({step, data_loss, reg_loss});
  }

  // Convergence flag: the trailing moving average must not exceed the one
  // three quarters in, and must end near the trajectory minimum.
  const int window = std::max(1, cfg.steps / 10);
  auto window_mean = [&](int end) {
    double acc = 0.0;
    const int begin = std::max(0, end - window);
    for (int i = begin; i < end; ++i) {
      acc += result.trace[static_cast<std::size_t>(i)].loss +
             result.trace[static_cast<std::size_t>(i)].reg_term;
    }
    return acc / std::max(1, end - begin);
  };
  const double tail = window_mean(cfg.steps);
  const double three_quarters = window_mean(std::max(window, (3 * cfg.steps) / 4));
  double best = tail;
  for (int end = window; end <= cfg.steps; end += window) best = std::min(best, window_mean(end));
  result.converged = tail <= three_quarters + 1e-12 || tail <= 1.05 * best + 1e-12;
  return result;
}

void write_csv(const std::vector<LossTraceRow>& trace, std::ostream& os) {
  os << "step,loss,reg_term\n";
  char buf[96];
  for (const auto& row : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", row.step, row.loss, row.reg_term);
    os << buf;
  }
}

double exact_expectation_loss(const Game& game, const WeightScheme& ws,
                              const Eigen::VectorXd& psi) {
  const int n = game.players();
  if (n != ws.players() || psi.size() != n) {
    throw std::invalid_argument("exact_expectation_loss: dimension mismatch");
  }
  const double v0 = game.value_mask(0);
  const std::uint64_t total = enumeration_count(n);
  double loss = 0.0;
  for (std::uint64_t mask = 1; mask + 1 < total; ++mask) {
    const int k = std::popcount(mask);
    double pred = 0.0;
    for (std::uint64_t b = mask; b != 0; b &= b - 1) pred += psi[std::countr_zero(b)];
    const double residual = game.value_mask(mask) - v0 - pred;
    loss += ws.subset_prob(k) * residual * residual;
  }
  return loss;
}

BoundAudit audit_bound(const AmortizedModel& model, const WeightScheme& ws,
                       const std::vector<Attribution>& oracle) {
  const int n = model.players();
  if (n > kMaxAuditPlayers) {
    throw std::invalid_argument("audit_bound: exact audit limited to n <= " +
                                std::to_string(kMaxAuditPlayers));
  }
  if (static_cast<int>(oracle.size()) != model.num_instances()) {
    throw std::invalid_argument("audit_bound: one oracle attribution per instance required");
  }

  const HessianReport hess = hessian_report(ws);
  BoundAudit audit;
  audit.sigma = hess.sigma;

  double lhs = 0.0, loss_theta = 0.0, loss_star = 0.0;
  for (int z = 0; z < model.num_instances(); ++z) {
    const Attribution& star = oracle[static_cast<std::size_t>(z)];
    star.validate();
    Eigen::VectorXd psi_star(n);
    for (int i = 0; i < n; ++i) psi_star[i] = star.values[static_cast<std::size_t>(i)];

    // Project the estimate onto the oracle's constraint plane.
    Eigen::VectorXd psi = model.forward(z);
    psi.array() += (star.sum() - psi.sum()) / n;

    lhs += (psi - psi_star).norm();
    loss_theta += exact_expectation_loss(model.game(z), ws, psi);
    loss_star += exact_expectation_loss(model.game(z), ws, psi_star);
  }
  const double m = static_cast<double>(model.num_instances());
  audit.lhs = lhs / m;
  audit.loss_theta = loss_theta / m;
  audit.loss_star = loss_star / m;
  if (audit.loss_theta < audit.loss_star - 1e-9) {
    throw std::runtime_error("audit_bound: oracle loss exceeds estimator loss beyond tolerance");
  }
  audit.rhs = std::sqrt(audit.sigma * std::max(0.0, audit.loss_theta - audit.loss_star));
  audit.violated = audit.lhs > audit.rhs + 1e-6;
  return audit;
}

}  // namespace wshap
