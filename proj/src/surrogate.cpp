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

#include "wshap/surrogate.hpp"

#include <cmath>

namespace wshap {

namespace {

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd p = (logits.array() - m).exp();
  return p / p.sum();
}

Eigen::VectorXd masked_input(const Eigen::VectorXd& x, std::uint64_t mask_bits) {
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd in(2 * d);
  for (int j = 0; j < d; ++j) {
    const bool on = (mask_bits >> j) & 1ULL;
    in[j] = on ? x[j] : 0.0;
    in[d + j] = on ? 1.0 : 0.0;
  }
  return in;
}

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  double kl = 0.0;
  for (Eigen::Index c = 0; c < p.size(); ++c) {
    if (p[c] > 0.0) kl += p[c] * (std::log(p[c]) - std::log(std::max(q[c], 1e-300)));
  }
  return kl;
}

}  // namespace

LinearSoftmaxClassifier::LinearSoftmaxClassifier(Eigen::MatrixXd w, Eigen::VectorXd b)
    : w_(std::move(w)), b_(std::move(b)) {
  if (w_.rows() != b_.size()) throw std::invalid_argument("LinearSoftmaxClassifier: shape mismatch");
  if (w_.rows() < 2) throw std::invalid_argument("LinearSoftmaxClassifier: need >= 2 classes");
}

Eigen::VectorXd LinearSoftmaxClassifier::predict_proba(const Eigen::VectorXd& x) const {
  return softmax(w_ * x + b_);
}

LinearSoftmaxClassifier LinearSoftmaxClassifier::fit(const LabeledDataset& data, int steps,
                                                     double lr, std::uint64_t seed) {
  data.validate();
  const int d = data.dim();
  const int K = data.num_classes();
  const auto train = data.train_indices();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(K, d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(K);
  Rng rng(seed);
  for (int step = 0; step < steps; ++step) {
    const int row = train[static_cast<std::size_t>(rng.index(static_cast<int>(train.size())))];
    const Eigen::VectorXd x = data.features.row(row).transpose();
    const int y = data.class_index(data.labels[static_cast<std::size_t>(row)]);
    Eigen::VectorXd p = softmax(w * x + b);
    p[y] -= 1.0;  // d(cross entropy)/d(logits)
    w -= lr * p * x.transpose();
    b -= lr * p;
  }
  return LinearSoftmaxClassifier(std::move(w), std::move(b));
}

SurrogateModel::SurrogateModel(Mlp net, int feature_dim, int num_classes)
    : net_(std::move(net)), feature_dim_(feature_dim), num_classes_(num_classes) {
  if (net_.input_dim() != 2 * feature_dim || net_.output_dim() != num_classes) {
    throw std::invalid_argument("SurrogateModel: net shape does not match (2d -> K)");
  }
}

Eigen::VectorXd SurrogateModel::predict_proba_mask(const Eigen::VectorXd& x,
                                                   std::uint64_t mask_bits) const {
  if (static_cast<int>(x.size()) != feature_dim_) {
    throw std::invalid_argument("SurrogateModel: feature dim mismatch");
  }
  return softmax(net_.forward(masked_input(x, mask_bits)));
}

Eigen::VectorXd SurrogateModel::predict_proba(const Eigen::VectorXd& x,
                                              const Coalition& mask) const {
  if (mask.players() != feature_dim_) {
    throw std::invalid_argument("SurrogateModel: mask dim mismatch");
  }
  return predict_proba_mask(x, mask.bits());
}

SurrogateTrainResult train_surrogate(const LabeledDataset& data, const BaseClassifier& base,
                                     const SurrogateTrainConfig& cfg) {
  data.validate();
  const int d = data.dim();
  const int K = base.num_classes();
  if (base.feature_dim() != d) throw std::invalid_argument("train_surrogate: feature dim mismatch");
  if (d > kMaxCoalitionPlayers) throw std::invalid_argument("train_surrogate: d > 64");

  const auto train = data.train_indices();
  Rng rng(cfg.seed);
  Mlp net = Mlp::randomized({2 * d, cfg.hidden, K}, 1.0, rng);

  // Teacher outputs are reused across steps.
  std::vector<Eigen::VectorXd> teacher(train.size());
  for (std::size_t t = 0; t < train.size(); ++t) {
    teacher[t] = base.predict_proba(data.features.row(train[t]).transpose());
  }

  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(cfg.steps));
  const std::uint64_t full = d == 64 ? ~0ULL : ((1ULL << d) - 1);
  for (int step = 0; step < cfg.steps; ++step) {
    net.zero_grad();
    double loss = 0.0;
    for (int bidx = 0; bidx < cfg.batch; ++bidx) {
      const std::size_t t = static_cast<std::size_t>(rng.index(static_cast<int>(train.size())));
      const Eigen::VectorXd x = data.features.row(train[t]).transpose();
      const std::uint64_t mask = rng.next_u64() & full;  // uniform over all subsets
      Mlp::Trace tr;
      const Eigen::VectorXd logits = net.forward(masked_input(x, mask), &tr);
      const Eigen::VectorXd p = softmax(logits);
      loss += kl_divergence(teacher[t], p);
      // d KL(f || softmax(z)) / d z = p - f
      net.backward(tr, (p - teacher[t]) / static_cast<double>(cfg.batch));
    }
    loss /= static_cast<double>(cfg.batch);
    if (!std::isfinite(loss)) {
      throw TrainingDivergedError("train_surrogate: non-finite loss at step " +
                                      std::to_string(step),
                                  step);
    }
    net.sgd_step(cfg.lr);
    trace.push_back(loss);
  }

  SurrogateTrainResult result;
  result.model = SurrogateModel(std::move(net), d, K);
  const int window = std::max(1, cfg.steps / 10);
  double tail = 0.0;
  for (int i = cfg.steps - window; i < cfg.steps; ++i) tail += trace[static_cast<std::size_t>(i)];
  result.final_loss = tail / window;
  result.loss_trace = std::move(trace);
  return result;
}

Game masked_feature_game(const Eigen::VectorXd& x, int label, const SurrogateModel& surrogate) {
  const int d = surrogate.feature_dim();
  if (static_cast<int>(x.size()) != d) {
    throw std::invalid_argument("masked_feature_game: feature dim mismatch");
  }
  if (label < 0 || label >= surrogate.num_classes()) {
    throw std::invalid_argument("masked_feature_game: label out of range");
  }
  return Game(d, "masked_feature", [x, label, surrogate](const Coalition& s) {
    return surrogate.predict_proba_mask(x, s.bits())[label];
  });
}

}  // namespace wshap
