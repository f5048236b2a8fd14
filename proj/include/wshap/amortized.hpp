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

#ifndef WSHAP_AMORTIZED_HPP
#define WSHAP_AMORTIZED_HPP

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <vector>

#include "wshap/game.hpp"
#include "wshap/nn.hpp"
#include "wshap/oracle.hpp"
#include "wshap/surrogate.hpp"
#include "wshap/weights.hpp"

namespace wshap {

// The bound audit enumerates the exact expectation loss per instance.
inline constexpr int kMaxAuditPlayers = 12;

/// A trained estimator together with its per-instance games. forward() is
/// inference (no game evaluations); forward_train()/backward() carry the
/// activation trace for one SGD step.
class AmortizedModel {
 public:
  virtual ~AmortizedModel() = default;

  virtual int num_instances() const = 0;
  virtual int players() const = 0;
  virtual const Game& game(int instance) const = 0;

  virtual Eigen::VectorXd forward(int instance) const = 0;
  virtual Eigen::VectorXd forward_train(int instance) = 0;
  virtual void backward(int instance, const Eigen::VectorXd& grad_psi) = 0;

  virtual void zero_grad() = 0;
  virtual void sgd_step(double lr) = 0;

  virtual std::size_t num_params() const = 0;
  virtual double param(std::size_t idx) const = 0;
  virtual void set_param(std::size_t idx, double value) = 0;
  virtual double grad(std::size_t idx) const = 0;
};

/// Feature-attribution head: one MLP mapping an instance encoding to the
/// n attribution values.
class MlpHeadModel : public AmortizedModel {
 public:
  struct Instance {
    Eigen::VectorXd input;
    Game game;
  };

  MlpHeadModel(Mlp net, std::vector<Instance> instances);
  static MlpHeadModel randomized(int input_dim, int hidden, int players,
                                 std::vector<Instance> instances, double scale, Rng& rng);
  /// Constant head that outputs `values` for every input (zero weights,
  /// last-layer bias teacher-forced).
  static MlpHeadModel teacher_forced(int input_dim, int hidden,
                                     const std::vector<double>& values,
                                     std::vector<Instance> instances);

  int num_instances() const override { return static_cast<int>(instances_.size()); }
  int players() const override { return net_.output_dim(); }
  const Game& game(int instance) const override;
  Eigen::VectorXd forward(int instance) const override;
  Eigen::VectorXd forward_train(int instance) override;
  void backward(int instance, const Eigen::VectorXd& grad_psi) override;
  void zero_grad() override { net_.zero_grad(); }
  void sgd_step(double lr) override { net_.sgd_step(lr); }
  std::size_t num_params() const override { return net_.num_params(); }
  double param(std::size_t idx) const override { return net_.param(idx); }
  void set_param(std::size_t idx, double value) override { net_.set_param(idx, value); }
  double grad(std::size_t idx) const override { return net_.grad(idx); }

  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }

 private:
  Mlp net_;
  std::vector<Instance> instances_;
  std::vector<Mlp::Trace> traces_;
};

/// Data-valuation head: the attention valuator over (train, val) batches;
/// players are the batch's train points.
class AttentionHeadModel : public AmortizedModel {
 public:
  struct Instance {
    Eigen::MatrixXd train_in;  // encoded train rows ([x; one-hot label])
    std::vector<int> train_y;
    Eigen::MatrixXd val_in;
    std::vector<int> val_y;
    Game game;                 // over the batch's train points
  };

  AttentionHeadModel(AttentionValuator net, std::vector<Instance> instances);

  int num_instances() const override { return static_cast<int>(instances_.size()); }
  int players() const override;
  const Game& game(int instance) const override;
  Eigen::VectorXd forward(int instance) const override;
  Eigen::VectorXd forward_train(int instance) override;
  void backward(int instance, const Eigen::VectorXd& grad_psi) override;
  void zero_grad() override { net_.zero_grad(); }
  void sgd_step(double lr) override { net_.sgd_step(lr); }
  std::size_t num_params() const override { return net_.num_params(); }
  double param(std::size_t idx) const override { return net_.param(idx); }
  void set_param(std::size_t idx, double value) override { net_.set_param(idx, value); }
  double grad(std::size_t idx) const override { return net_.grad(idx); }

  AttentionValuator& net() { return net_; }
  const AttentionValuator& net() const { return net_; }

  /// Inference on an arbitrary batch (e.g. the full train set).
  Eigen::VectorXd value_batch(const Eigen::MatrixXd& train_in, const std::vector<int>& train_y,
                              const Eigen::MatrixXd& val_in, const std::vector<int>& val_y) const;

 private:
  AttentionValuator net_;
  std::vector<Instance> instances_;
  std::vector<AttentionValuator::Trace> traces_;
};

/// Encodes dataset rows for the attention valuator: features followed by a
/// one-hot label block.
Eigen::MatrixXd encode_points(const LabeledDataset& data, const std::vector<int>& rows);

/// Seeded self-supervised data-valuation task over a dataset: instances
/// are (train batch, val batch) pairs with KNN games restricted to the
/// batch, plus a randomly initialized attention valuator.
struct AttentionTaskConfig {
  int batch_size = 10;
  int val_batch = 10;
  int num_instances = 12;
  int k_neighbors = 5;
  int hidden = 32;
  int key_dim = 16;
  double init_scale = 0.5;
  std::uint64_t seed = 0;
};

AttentionHeadModel build_attention_task(const LabeledDataset& data,
                                        const AttentionTaskConfig& cfg);

struct TrainConfig {
  int steps = 2000;
  int batch_instances = 1;
  int subsets_per_instance = 16;
  double lr = 0.005;
  double gamma = 10.0;  // efficiency-regularizer weight, >= 0
  enum class ConstraintSource { kOracle, kMcEstimate, kNone };
  ConstraintSource constraint_source = ConstraintSource::kOracle;
  std::uint64_t mc_constraint_samples = 20000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct LossTraceRow {
  int step;
  double loss;      // empirical expectation term
  double reg_term;  // gamma * mean (1^T psi - C)^2
};

struct TrainResult {
  std::vector<LossTraceRow> trace;
  bool converged = false;  // trailing moving-average descent flag
  std::vector<double> constraint_constants;
};

/// Minimizes the sampled expectation loss plus the efficiency regularizer
/// by plain SGD; fresh subsets are drawn from p(s) every step. Throws
/// TrainingDivergedError on NaN loss.
TrainResult train(AmortizedModel& model, const WeightScheme& ws, const TrainConfig& cfg);

// CSV with header `step,loss,reg_term`.
void write_csv(const std::vector<LossTraceRow>& trace, std::ostream& os);

/// Both sides of the estimation-error bound
///   E_z ||psi(z;theta) - psi(v_z)||_2 <= sqrt(sigma (L(theta) - L*)),
/// with sigma = 2/mu and mu = 2 lambda_min(E[s s^T]). Estimator outputs are
/// projected onto the constraint plane 1^T psi = sum(oracle_z) before both
/// sides are computed; the bound is a consequence of strong convexity on
/// that plane, and L* is attained by the constrained-WLS oracle there.
struct BoundAudit {
  double lhs = 0.0;
  double loss_theta = 0.0;
  double loss_star = 0.0;
  double sigma = 0.0;
  double rhs = 0.0;
  bool violated = false;  // lhs > rhs + 1e-6
};

BoundAudit audit_bound(const AmortizedModel& model, const WeightScheme& ws,
                       const std::vector<Attribution>& oracle);

/// The exact expectation loss sum_{0<|s|<n} p(|s|)/C(n,|s|) (v(s)-v(0)-s^T psi)^2.
double exact_expectation_loss(const Game& game, const WeightScheme& ws,
                              const Eigen::VectorXd& psi);

}  // namespace wshap

#endif  // WSHAP_AMORTIZED_HPP
