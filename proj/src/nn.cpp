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

#include "wshap/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace wshap {

Mlp::Mlp(const std::vector<int>& dims) : dims_(dims) {
  if (dims.size() < 2) throw std::invalid_argument("Mlp: need at least input and output dims");
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    DenseLayer layer;
    layer.w = Eigen::MatrixXd::Zero(dims[l + 1], dims[l]);
    layer.b = Eigen::VectorXd::Zero(dims[l + 1]);
    layer.gw = Eigen::MatrixXd::Zero(dims[l + 1], dims[l]);
    layer.gb = Eigen::VectorXd::Zero(dims[l + 1]);
    layers_.push_back(std::move(layer));
  }
}

Mlp Mlp::randomized(const std::vector<int>& dims, double scale, Rng& rng) {
  Mlp net(dims);
  for (auto& layer : net.layers_) {
    const double s = scale / std::sqrt(static_cast<double>(layer.w.cols()));
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c) layer.w(r, c) = s * rng.normal();
    }
  }
  return net;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x, Trace* trace) const {
  if (x.size() != input_dim()) throw std::invalid_argument("Mlp::forward: input dim mismatch");
  if (trace) {
    trace->input = x;
    trace->pre.clear();
    trace->pre.reserve(layers_.size());
  }
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::VectorXd z = layers_[l].w * a + layers_[l].b;
    if (trace) trace->pre.push_back(z);
    a = (l + 1 < layers_.size()) ? z.cwiseMax(0.0) : z;
  }
  return a;
}

Eigen::VectorXd Mlp::backward(const Trace& trace, const Eigen::VectorXd& grad_out) {
  Eigen::VectorXd delta = grad_out;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Eigen::VectorXd a_prev =
        l == 0 ? trace.input
               : trace.pre[l - 1].cwiseMax(0.0);
    layers_[l].gw.noalias() += delta * a_prev.transpose();
    layers_[l].gb += delta;
    if (l == 0) {
      delta = layers_[l].w.transpose() * delta;
    } else {
      delta = (layers_[l].w.transpose() * delta).eval();
      delta = delta.array() * (trace.pre[l - 1].array() > 0.0).cast<double>();
    }
  }
  return delta;
}

void Mlp::zero_grad() {
  for (auto& layer : layers_) {
    layer.gw.setZero();
    layer.gb.setZero();
  }
}

void Mlp::sgd_step(double lr) {
  for (auto& layer : layers_) {
    layer.w -= lr * layer.gw;
    layer.b -= lr * layer.gb;
  }
}

std::size_t Mlp::num_params() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) {
    n += static_cast<std::size_t>(layer.w.size() + layer.b.size());
  }
  return n;
}

namespace {

// Locates flat index `idx` inside a layer list; returns (layer, offset).
std::pair<std::size_t, std::size_t> locate(const std::vector<DenseLayer>& layers,
                                           std::size_t idx) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::size_t count = static_cast<std::size_t>(layers[l].w.size() + layers[l].b.size());
    if (idx < count) return {l, idx};
    idx -= count;
  }
  throw std::out_of_range("Mlp: parameter index out of range");
}

}  // namespace

double Mlp::param(std::size_t idx) const {
  const auto [l, off] = locate(layers_, idx);
  const auto& layer = layers_[l];
  const std::size_t wn = static_cast<std::size_t>(layer.w.size());
  if (off < wn) return layer.w.data()[off];
  return layer.b[static_cast<Eigen::Index>(off - wn)];
}

void Mlp::set_param(std::size_t idx, double value) {
  const auto [l, off] = locate(layers_, idx);
  auto& layer = layers_[l];
  const std::size_t wn = static_cast<std::size_t>(layer.w.size());
  if (off < wn) {
    layer.w.data()[off] = value;
  } else {
    layer.b[static_cast<Eigen::Index>(off - wn)] = value;
  }
}

double Mlp::grad(std::size_t idx) const {
  const auto [l, off] = locate(layers_, idx);
  const auto& layer = layers_[l];
  const std::size_t wn = static_cast<std::size_t>(layer.w.size());
  if (off < wn) return layer.gw.data()[off];
  return layer.gb[static_cast<Eigen::Index>(off - wn)];
}

std::vector<double> Mlp::flatten() const {
  std::vector<double> flat(num_params());
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = param(i);
  return flat;
}

void Mlp::load_flat(const std::vector<double>& flat) {
  if (flat.size() != num_params()) throw std::invalid_argument("Mlp::load_flat: size mismatch");
  for (std::size_t i = 0; i < flat.size(); ++i) set_param(i, flat[i]);
}

AttentionValuator::AttentionValuator(int input_dim, int hidden, int key_dim)
    : f_query_({input_dim, hidden, key_dim}),
      f_key_({input_dim, hidden, key_dim}),
      f_out_({key_dim, hidden, 1}) {}

AttentionValuator AttentionValuator::randomized(int input_dim, int hidden, int key_dim,
                                                double scale, Rng& rng) {
  AttentionValuator v(input_dim, hidden, key_dim);
  v.f_query_ = Mlp::randomized({input_dim, hidden, key_dim}, scale, rng);
  v.f_key_ = Mlp::randomized({input_dim, hidden, key_dim}, scale, rng);
  v.f_out_ = Mlp::randomized({key_dim, hidden, 1}, scale, rng);
  return v;
}

Eigen::VectorXd AttentionValuator::forward(const Eigen::MatrixXd& train_in,
                                           const std::vector<int>& train_y,
                                           const Eigen::MatrixXd& val_in,
                                           const std::vector<int>& val_y, Trace* trace) const {
  const int n_train = static_cast<int>(train_in.rows());
  const int n_val = static_cast<int>(val_in.rows());
  if (n_train == 0 || n_val == 0) {
    throw std::invalid_argument("AttentionValuator: empty batch");
  }
  if (static_cast<int>(train_y.size()) != n_train || static_cast<int>(val_y.size()) != n_val) {
    throw std::invalid_argument("AttentionValuator: label count mismatch");
  }

  const int h = key_dim();
  const double inv_sqrt_h = 1.0 / std::sqrt(static_cast<double>(h));

  Eigen::MatrixXd q(n_train, h), k(n_val, h);
  if (trace) {
    trace->query.resize(static_cast<std::size_t>(n_train));
    trace->key.resize(static_cast<std::size_t>(n_val));
    trace->out.resize(static_cast<std::size_t>(n_train));
    trace->train_y = train_y;
    trace->val_y = val_y;
  }
  for (int i = 0; i < n_train; ++i) {
    q.row(i) = f_query_
                   .forward(train_in.row(i).transpose(),
                            trace ? &trace->query[static_cast<std::size_t>(i)] : nullptr)
                   .transpose();
  }
  for (int j = 0; j < n_val; ++j) {
    k.row(j) = f_key_
                   .forward(val_in.row(j).transpose(),
                            trace ? &trace->key[static_cast<std::size_t>(j)] : nullptr)
                   .transpose();
  }

  Eigen::MatrixXd sim = Eigen::MatrixXd::Zero(n_train, n_val);
  for (int i = 0; i < n_train; ++i) {
    for (int j = 0; j < n_val; ++j) {
      if (train_y[static_cast<std::size_t>(i)] == val_y[static_cast<std::size_t>(j)]) {
        sim(i, j) = q.row(i).dot(k.row(j)) * inv_sqrt_h;
      }
    }
  }
  Eigen::MatrixXd attn = sim * k;  // n_train x key_dim

  Eigen::VectorXd estimates(n_train);
  for (int i = 0; i < n_train; ++i) {
    estimates[i] = f_out_
                       .forward(attn.row(i).transpose(),
                                trace ? &trace->out[static_cast<std::size_t>(i)] : nullptr)[0];
  }
  if (trace) {
    trace->q = std::move(q);
    trace->k = std::move(k);
    trace->sim = std::move(sim);
    trace->attn = std::move(attn);
  }
  return estimates;
}

void AttentionValuator::backward(const Trace& trace, const Eigen::VectorXd& grad_estimates) {
  const int n_train = static_cast<int>(trace.q.rows());
  const int n_val = static_cast<int>(trace.k.rows());
  const int h = key_dim();
  const double inv_sqrt_h = 1.0 / std::sqrt(static_cast<double>(h));

  Eigen::MatrixXd g_attn(n_train, h);
  for (int i = 0; i < n_train; ++i) {
    Eigen::VectorXd g1(1);
    g1[0] = grad_estimates[i];
    g_attn.row(i) = f_out_.backward(trace.out[static_cast<std::size_t>(i)], g1).transpose();
  }

  // attn_i = sum_j c_ij k_j,  c_ij = mask_ij (q_i . k_j) / sqrt(h)
  Eigen::MatrixXd g_q = Eigen::MatrixXd::Zero(n_train, h);
  Eigen::MatrixXd g_k = Eigen::MatrixXd::Zero(n_val, h);
  for (int i = 0; i < n_train; ++i) {
    for (int j = 0; j < n_val; ++j) {
      if (trace.train_y[static_cast<std::size_t>(i)] != trace.val_y[static_cast<std::size_t>(j)]) continue;
      const double g_c = g_attn.row(i).dot(trace.k.row(j));
      g_q.row(i) += g_c * inv_sqrt_h * trace.k.row(j);
      g_k.row(j) += trace.sim(i, j) * g_attn.row(i) + g_c * inv_sqrt_h * trace.q.row(i);
    }
  }
  for (int i = 0; i < n_train; ++i) {
    f_query_.backward(trace.query[static_cast<std::size_t>(i)], g_q.row(i).transpose());
  }
  for (int j = 0; j < n_val; ++j) {
    f_key_.backward(trace.key[static_cast<std::size_t>(j)], g_k.row(j).transpose());
  }
}

void AttentionValuator::zero_grad() {
  f_query_.zero_grad();
  f_key_.zero_grad();
  f_out_.zero_grad();
}

void AttentionValuator::sgd_step(double lr) {
  f_query_.sgd_step(lr);
  f_key_.sgd_step(lr);
  f_out_.sgd_step(lr);
}

std::size_t AttentionValuator::num_params() const {
  return f_query_.num_params() + f_key_.num_params() + f_out_.num_params();
}

double AttentionValuator::param(std::size_t idx) const {
  if (idx < f_query_.num_params()) return f_query_.param(idx);
  idx -= f_query_.num_params();
  if (idx < f_key_.num_params()) return f_key_.param(idx);
  idx -= f_key_.num_params();
  return f_out_.param(idx);
}

void AttentionValuator::set_param(std::size_t idx, double value) {
  if (idx < f_query_.num_params()) {
    f_query_.set_param(idx, value);
    return;
  }
  idx -= f_query_.num_params();
  if (idx < f_key_.num_params()) {
    f_key_.set_param(idx, value);
    return;
  }
  idx -= f_key_.num_params();
  f_out_.set_param(idx, value);
}

double AttentionValuator::grad(std::size_t idx) const {
  if (idx < f_query_.num_params()) return f_query_.grad(idx);
  idx -= f_query_.num_params();
  if (idx < f_key_.num_params()) return f_key_.grad(idx);
  idx -= f_key_.num_params();
  return f_out_.grad(idx);
}

}  // namespace wshap
