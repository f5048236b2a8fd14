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

#ifndef WSHAP_DATASET_HPP
#define WSHAP_DATASET_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace wshap {

enum class Split { kTrain, kVal };

/// Tabular classification data with train/val markers.
/// CSV schema: header row `f0,...,f{d-1},label,split`, split in {train,val}.
struct LabeledDataset {
  Eigen::MatrixXd features;  // m x d
  std::vector<int> labels;   // m, values in class_ids()
  std::vector<Split> split;  // m

  int size() const { return static_cast<int>(labels.size()); }
  int dim() const { return static_cast<int>(features.cols()); }

  std::vector<int> class_ids() const;  // sorted unique labels
  int num_classes() const { return static_cast<int>(class_ids().size()); }
  int class_index(int label) const;    // position of label in class_ids()

  std::vector<int> train_indices() const;
  std::vector<int> val_indices() const;

  // Throws on NaN/Inf features or an empty split.
  void validate() const;
};

LabeledDataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const LabeledDataset& data, const std::string& path);

/// Two Gaussian blobs (classes 0/1) at -separation/+separation per axis.
LabeledDataset make_blob_dataset(int m_train, int m_val, int dim, double separation,
                                 std::uint64_t seed);

/// N(0,I) features; the label is the sign of feature `relevant` (class 0/1).
/// Every other feature is noise.
LabeledDataset make_single_feature_dataset(int m_train, int m_val, int dim, int relevant,
                                           std::uint64_t seed);

/// Flips `fraction` of the train labels (rounded) to a uniformly random
/// other class. Returns the flipped row indices, ascending.
std::vector<int> flip_train_labels(LabeledDataset& data, double fraction, std::uint64_t seed);

}  // namespace wshap

#endif  // WSHAP_DATASET_HPP
