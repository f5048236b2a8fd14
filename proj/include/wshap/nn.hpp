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

#ifndef WSHAP_NN_HPP
#define WSHAP_NN_HPP

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "wshap/rng.hpp"

namespace wshap {

struct DenseLayer {
  Eigen::MatrixXd w;   // out x in
  Eigen::VectorXd b;   // out
  Eigen::MatrixXd gw;  // gradient buffers, same shapes
  Eigen::VectorXd gb;
};

/// Dense affine stack with ReLU between layers (linear output).
/// backward() accumulates parameter gradients and returns the input
/// gradient; callers zero_grad() between steps.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(const std::vector<int>& dims);  // zero-initialized
  static Mlp randomized(const std::vector<int>& dims, double scale, Rng& rng);

  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  const std::vector<int>& dims() const { return dims_; }

  struct Trace {
    Eigen::VectorXd input;
    std::vector<Eigen::VectorXd> pre;  // pre-activations per layer
  };

  Eigen::VectorXd forward(const Eigen::VectorXd& x, Trace* trace = nullptr) const;
  Eigen::VectorXd backward(const Trace& trace, const Eigen::VectorXd& grad_out);

  void zero_grad();
  void sgd_step(double lr);

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  // Flat parameter view (layer order, row-major weights then bias).
  std::size_t num_params() const;
  double param(std::size_t idx) const;
  void set_param(std::size_t idx, double value);
  double grad(std::size_t idx) const;
  std::vector<double> flatten() const;
  void load_flat(const std::vector<double>& flat);

 private:
  std::vector<int> dims_;
  std::vector<DenseLayer> layers_;
};

/// The data-valuation head: queries from train points, keys (= values)
/// from val points, similarities masked to label-matching pairs,
///
///   q_i = f_query(train_i)        k_j = f_key(val_j)
///   sim_ij = [y_i == y_j] * (q_i . k_j) / sqrt(key_dim)
///   estimate_i = f_out(sum_j sim_ij * k_j)
///
/// A train point whose label matches no val label gets an all-zero
/// attention row, so its estimate is f_out(0).
class AttentionValuator {
 public:
  AttentionValuator() = default;
  AttentionValuator(int input_dim, int hidden, int key_dim);
  static AttentionValuator randomized(int input_dim, int hidden, int key_dim, double scale,
                                      Rng& rng);

  int input_dim() const { return f_query_.input_dim(); }
  int key_dim() const { return f_query_.output_dim(); }

  struct Trace {
    std::vector<Mlp::Trace> query;  // per train point
    std::vector<Mlp::Trace> key;    // per val point
    std::vector<Mlp::Trace> out;    // per train point
    Eigen::MatrixXd q;              // n_train x key_dim
    Eigen::MatrixXd k;              // n_val x key_dim
    Eigen::MatrixXd sim;            // n_train x n_val (masked, scaled)
    Eigen::MatrixXd attn;           // n_train x key_dim
    std::vector<int> train_y, val_y;
  };

  /// Rows of train_in / val_in are encoded points; labels drive the mask.
  Eigen::VectorXd forward(const Eigen::MatrixXd& train_in, const std::vector<int>& train_y,
                          const Eigen::MatrixXd& val_in, const std::vector<int>& val_y,
                          Trace* trace = nullptr) const;
  void backward(const Trace& trace, const Eigen::VectorXd& grad_estimates);

  void zero_grad();
  void sgd_step(double lr);

  Mlp& f_query() { return f_query_; }
  Mlp& f_key() { return f_key_; }
  Mlp& f_out() { return f_out_; }
  const Mlp& f_query() const { return f_query_; }
  const Mlp& f_key() const { return f_key_; }
  const Mlp& f_out() const { return f_out_; }

  std::size_t num_params() const;
  double param(std::size_t idx) const;
  void set_param(std::size_t idx, double value);
  double grad(std::size_t idx) const;

 private:
  Mlp f_query_, f_key_, f_out_;
};

}  // namespace wshap

#endif  // WSHAP_NN_HPP
