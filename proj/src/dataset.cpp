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

#include "wshap/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "wshap/rng.hpp"

namespace wshap {

std::vector<int> LabeledDataset::class_ids() const {
  std::set<int> ids(labels.begin(), labels.end());
  return {ids.begin(), ids.end()};
}

int LabeledDataset::class_index(int label) const {
  const auto ids = class_ids();
  const auto it = std::lower_bound(ids.begin(), ids.end(), label);
  if (it == ids.end() || *it != label) {
    throw std::invalid_argument("LabeledDataset: unknown label " + std::to_string(label));
  }
  return static_cast<int>(it - ids.begin());
}

std::vector<int> LabeledDataset::train_indices() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (split[static_cast<std::size_t>(i)] == Split::kTrain) out.push_back(i);
  }
  return out;
}

std::vector<int> LabeledDataset::val_indices() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (split[static_cast<std::size_t>(i)] == Split::kVal) out.push_back(i);
  }
  return out;
}

void LabeledDataset::validate() const {
  const int m = size();
  if (m == 0) throw std::invalid_argument("LabeledDataset: empty");
  if (features.rows() != m || static_cast<int>(split.size()) != m) {
    throw std::invalid_argument("LabeledDataset: inconsistent row counts");
  }
  if (!features.allFinite()) {
    throw std::invalid_argument("LabeledDataset: features contain NaN/Inf");
  }
  if (train_indices().empty() || val_indices().empty()) {
    throw std::invalid_argument("LabeledDataset: both splits must be nonempty");
  }
}

LabeledDataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);

  // Header: f0..f{d-1},label,split
  int d = 0;
  {
    std::stringstream ss(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() < 3 || cols[cols.size() - 2] != "label" || cols.back() != "split") {
      throw std::runtime_error("dataset header must be f0,...,label,split: " + path);
    }
    d = static_cast<int>(cols.size()) - 2;
  }

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::vector<Split> split;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != d + 2) {
      throw std::runtime_error("dataset row has wrong column count: " + line);
    }
    std::vector<double> feats(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) feats[static_cast<std::size_t>(j)] = std::stod(cells[static_cast<std::size_t>(j)]);
    rows.push_back(std::move(feats));
    labels.push_back(std::stoi(cells[static_cast<std::size_t>(d)]));
    const std::string& tag = cells[static_cast<std::size_t>(d + 1)];
    if (tag == "train") {
      split.push_back(Split::kTrain);
    } else if (tag == "val") {
      split.push_back(Split::kVal);
    } else {
      throw std::runtime_error("dataset split tag must be train or val, got: " + tag);
    }
  }

  LabeledDataset data;
  data.features.resize(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < d; ++j) data.features(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  }
  data.labels = std::move(labels);
  data.split = std::move(split);
  data.validate();
  return data;
}

void save_dataset_csv(const LabeledDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  const int d = data.dim();
  for (int j = 0; j < d; ++j) out << 'f' << j << ',';
  out << "label,split\n";
  char buf[64];
  for (int i = 0; i < data.size(); ++i) {
    for (int j = 0; j < d; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g,", data.features(i, j));
      out << buf;
    }
    out << data.labels[static_cast<std::size_t>(i)] << ','
        << (data.split[static_cast<std::size_t>(i)] == Split::kTrain ? "train" : "val") << '\n';
  }
  if (!out) throw std::runtime_error("failed writing dataset file: " + path);
}

LabeledDataset make_blob_dataset(int m_train, int m_val, int dim, double separation,
                                 std::uint64_t seed) {
  Rng rng(seed);
  LabeledDataset data;
  const int m = m_train + m_val;
  data.features.resize(m, dim);
  data.labels.resize(static_cast<std::size_t>(m));
  data.split.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const int y = rng.index(2);
    const double center = y == 1 ? separation : -separation;
    for (int j = 0; j < dim; ++j) data.features(i, j) = center + rng.normal();
    data.labels[static_cast<std::size_t>(i)] = y;
    data.split[static_cast<std::size_t>(i)] = i < m_train ? Split::kTrain : Split::kVal;
  }
  data.validate();
  return data;
}

LabeledDataset make_single_feature_dataset(int m_train, int m_val, int dim, int relevant,
                                           std::uint64_t seed) {
  if (relevant < 0 || relevant >= dim) {
    throw std::invalid_argument("make_single_feature_dataset: relevant feature out of range");
  }
  Rng rng(seed);
  LabeledDataset data;
  const int m = m_train + m_val;
  data.features.resize(m, dim);
  data.labels.resize(static_cast<std::size_t>(m));
  data.split.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < dim; ++j) data.features(i, j) = rng.normal();
    data.labels[static_cast<std::size_t>(i)] = data.features(i, relevant) > 0.0 ? 1 : 0;
    data.split[static_cast<std::size_t>(i)] = i < m_train ? Split::kTrain : Split::kVal;
  }
  data.validate();
  return data;
}

std::vector<int> flip_train_labels(LabeledDataset& data, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0) || !(fraction < 0.5)) {
    throw std::invalid_argument("flip_train_labels: fraction must be in (0, 0.5)");
  }
  const auto train = data.train_indices();
  const auto classes = data.class_ids();
  if (classes.size() < 2) throw std::invalid_argument("flip_train_labels: need >= 2 classes");
  const int count = static_cast<int>(std::llround(fraction * static_cast<double>(train.size())));

  Rng rng(seed);
  std::vector<int> pool = train;
  std::vector<int> flipped;
  for (int t = 0; t < count; ++t) {
    const int pick = rng.index(static_cast<int>(pool.size()));
    const int row = pool[static_cast<std::size_t>(pick)];
    pool.erase(pool.begin() + pick);
    const int old_label = data.labels[static_cast<std::size_t>(row)];
    // uniform over the other classes
    int offset = rng.index(static_cast<int>(classes.size()) - 1);
    for (int c : classes) {
      if (c == old_label) continue;
      if (offset-- == 0) {
        data.labels[static_cast<std::size_t>(row)] = c;
        break;
      }
    }
    flipped.push_back(row);
  }
  std::sort(flipped.begin(), flipped.end());
  return flipped;
}

}  // namespace wshap
