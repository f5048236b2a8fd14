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

#ifndef WSHAP_SURROGATE_HPP
#define WSHAP_SURROGATE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wshap/dataset.hpp"
#include "wshap/game.hpp"
#include "wshap/nn.hpp"

namespace wshap {

/// Base model f(x): a classifier whose predictions the surrogate mimics
/// under masking.
class BaseClassifier {
 public:
  virtual ~BaseClassifier() = default;
  virtual int feature_dim() const = 0;
  virtual int num_classes() const = 0;
  virtual Eigen::VectorXd predict_proba(const Eigen::VectorXd& x) const = 0;
};

/// softmax(W x + b)
class LinearSoftmaxClassifier : public BaseClassifier {
 public:
  LinearSoftmaxClassifier(Eigen::MatrixXd w, Eigen::VectorXd b);

  int feature_dim() const override { return static_cast<int>(w_.cols()); }
  int num_classes() const override { return static_cast<int>(w_.rows()); }
  Eigen::VectorXd predict_proba(const Eigen::VectorXd& x) const override;

  /// Multinomial logistic regression on the train split (plain SGD).
  static LinearSoftmaxClassifier fit(const LabeledDataset& data, int steps, double lr,
                                     std::uint64_t seed);

 private:
  Eigen::MatrixXd w_;
  Eigen::VectorXd b_;
};

/// Masked-input classifier p(y | x_s): zero-imputes masked features and
/// appends the binary mask, so "masked" and "value 0" stay distinguishable.
class SurrogateModel {
 public:
  SurrogateModel() = default;
  SurrogateModel(Mlp net, int feature_dim, int num_classes);

  int feature_dim() const { return feature_dim_; }
  int num_classes() const { return num_classes_; }

  Eigen::VectorXd predict_proba(const Eigen::VectorXd& x, const Coalition& mask) const;
  Eigen::VectorXd predict_proba_mask(const Eigen::VectorXd& x, std::uint64_t mask_bits) const;

  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }

 private:
  Mlp net_;
  int feature_dim_ = 0;
  int num_classes_ = 0;
};

struct SurrogateTrainConfig {
  int steps = 3000;
  int batch = 16;
  double lr = 0.05;
  int hidden = 64;
  std::uint64_t seed = 1;
};

struct SurrogateTrainResult {
  SurrogateModel model;
  std::vector<double> loss_trace;  // per-step mean KL
  double final_loss = 0.0;         // trailing moving average
};

class TrainingDivergedError : public std::runtime_error {
 public:
  TrainingDivergedError(const std::string& what, int step)
      : std::runtime_error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// Minimizes E_x E_s[ KL(base(x) || surrogate(x_s)) ] over the train split
/// with uniformly random masks. Throws TrainingDivergedError on NaN loss.
SurrogateTrainResult train_surrogate(const LabeledDataset& data, const BaseClassifier& base,
                                     const SurrogateTrainConfig& cfg);

/// Feature-attribution game: players are the d features of x and
/// v(s) = p_surr(label | x_s), bounded in [0,1].
Game masked_feature_game(const Eigen::VectorXd& x, int label, const SurrogateModel& surrogate);

}  // namespace wshap

#endif  // WSHAP_SURROGATE_HPP
