// Copyright 2026 The dpopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPOPT_DATA_DATASET_HPP_
#define DPOPT_DATA_DATASET_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace dpopt::data {

/// Row-major feature matrix plus integer labels in [0, num_classes).
struct Dataset {
  std::size_t num_features = 0;
  std::size_t num_classes = 0;
  std::vector<double> features;  // size() * num_features
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * num_features, num_features};
  }

  void validate() const {
    if (labels.empty()) throw std::invalid_argument("Dataset: empty");
    if (features.size() != labels.size() * num_features) {
      throw std::invalid_argument("Dataset: feature matrix shape mismatch");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes) {
        throw std::invalid_argument("Dataset: label out of range at sample " +
                                    std::to_string(i));
      }
    }
  }

  /// First n samples (n == 0 means everything).
  Dataset head(std::size_t n) const {
    if (n == 0 || n >= size()) return *this;
    Dataset out;
    out.num_features = num_features;
    out.num_classes = num_classes;
    out.features.assign(features.begin(),
                        features.begin() + static_cast<std::ptrdiff_t>(n * num_features));
    out.labels.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
  }
};

}  // namespace dpopt::data

#endif  // DPOPT_DATA_DATASET_HPP_
