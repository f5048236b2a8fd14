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

#include "wshap/knn_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace wshap {

Game knn_value_game_from_distances(const Eigen::MatrixXd& distances,
                                   std::vector<int> train_labels,
                                   std::vector<int> val_labels, int k_neighbors,
                                   int num_classes) {
  const int m_train = static_cast<int>(distances.cols());
  const int m_val = static_cast<int>(distances.rows());
  if (m_train < 1 || m_train > kMaxCoalitionPlayers) {
    throw std::invalid_argument("knn game: train size must be in [1,64]");
  }
  if (m_val < 1) throw std::invalid_argument("knn game: empty val set");
  if (static_cast<int>(train_labels.size()) != m_train ||
      static_cast<int>(val_labels.size()) != m_val) {
    throw std::invalid_argument("knn game: label count mismatch");
  }
  if (k_neighbors < 1) throw std::invalid_argument("knn game: K must be >= 1");
  if (num_classes < 2) throw std::invalid_argument("knn game: need >= 2 classes");

  // Per val point: train indices by (distance, index), infinite distances
  // dropped so such points can never vote.
  std::vector<std::vector<int>> ranks(static_cast<std::size_t>(m_val));
  for (int v = 0; v < m_val; ++v) {
    auto& order = ranks[static_cast<std::size_t>(v)];
    for (int t = 0; t < m_train; ++t) {
      if (std::isfinite(distances(v, t))) order.push_back(t);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return distances(v, a) < distances(v, b);
    });
  }

  const double prior = 1.0 / static_cast<double>(num_classes);

  auto fn = [ranks = std::move(ranks), train_labels = std::move(train_labels),
             val_labels = std::move(val_labels), k_neighbors, prior,
             m_val](const Coalition& s) {
    const std::uint64_t bits = s.bits();
    const int cap = std::min(k_neighbors, s.size());
    double acc = 0.0;
    std::map<int, int> votes;
    for (int v = 0; v < m_val; ++v) {
      votes.clear();
      int found = 0;
      for (int t : ranks[static_cast<std::size_t>(v)]) {
        if ((bits >> t) & 1ULL) {
          ++votes[train_labels[static_cast<std::size_t>(t)]];
          if (++found == cap) break;
        }
      }
      if (found == 0) {
        acc += prior;  // no finite-distance member can vote
        continue;
      }
      int best_label = 0, best_count = -1;
      for (const auto& [label, count] : votes) {
        if (count > best_count) {  // map order makes ties go to smaller label
          best_label = label;
          best_count = count;
        }
      }
      if (best_label == val_labels[static_cast<std::size_t>(v)]) acc += 1.0;
    }
    return acc / static_cast<double>(m_val);
  };

  return Game(m_train, "knn", std::move(fn));
}

Game knn_value_game(const LabeledDataset& data, const std::vector<int>& val_points,
                    int k_neighbors) {
  data.validate();
  if (val_points.empty()) throw std::invalid_argument("knn game: empty val set");
  const auto train = data.train_indices();
  const int m_train = static_cast<int>(train.size());
  const int m_val = static_cast<int>(val_points.size());

  Eigen::MatrixXd dist(m_val, m_train);
  std::vector<int> train_labels(static_cast<std::size_t>(m_train));
  std::vector<int> val_labels(static_cast<std::size_t>(m_val));
  for (int t = 0; t < m_train; ++t) {
    train_labels[static_cast<std::size_t>(t)] = data.labels[static_cast<std::size_t>(train[static_cast<std::size_t>(t)])];
  }
  for (int v = 0; v < m_val; ++v) {
    const int row = val_points[static_cast<std::size_t>(v)];
    val_labels[static_cast<std::size_t>(v)] = data.labels[static_cast<std::size_t>(row)];
    for (int t = 0; t < m_train; ++t) {
      dist(v, t) = (data.features.row(row) - data.features.row(train[static_cast<std::size_t>(t)])).norm();
    }
  }
  return knn_value_game_from_distances(dist, std::move(train_labels), std::move(val_labels),
                                       k_neighbors, data.num_classes());
}

Game knn_value_game(const LabeledDataset& data, int k_neighbors) {
  return knn_value_game(data, data.val_indices(), k_neighbors);
}

}  // namespace wshap
