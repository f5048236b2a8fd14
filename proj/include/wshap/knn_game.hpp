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

#ifndef WSHAP_KNN_GAME_HPP
#define WSHAP_KNN_GAME_HPP

#include <Eigen/Core>
#include <vector>

#include "wshap/dataset.hpp"
#include "wshap/game.hpp"

namespace wshap {

/// KNN data-valuation game. Players are train points; v(s) is the mean,
/// over val points, of [majority label among the min(K,|s|) nearest train
/// points present in s equals the val label]. v(empty) = 1/num_classes.
///
/// Conventions:
///  - equidistant neighbors are ordered by lower train index;
///  - majority-vote ties go to the smallest class id;
///  - if |s| < K, all points of s vote;
///  - points at infinite distance are never neighbors (so they are exact
///    null players); if a coalition has only such points, v falls back to
///    the 1/num_classes prior.
///
/// `distances` is val x train; `num_classes` fixes the empty-set prior.
Game knn_value_game_from_distances(const Eigen::MatrixXd& distances,
                                   std::vector<int> train_labels,
                                   std::vector<int> val_labels, int k_neighbors,
                                   int num_classes);

/// Euclidean distances on raw feature rows; players are the train split of
/// `data`, scored against `val_points` (dataset row indices).
Game knn_value_game(const LabeledDataset& data, const std::vector<int>& val_points,
                    int k_neighbors);

/// Convenience overload scoring against the whole val split.
Game knn_value_game(const LabeledDataset& data, int k_neighbors);

}  // namespace wshap

#endif  // WSHAP_KNN_GAME_HPP
