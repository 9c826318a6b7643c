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

#include "dpopt/data/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "dpopt/core/rng.hpp"

namespace dpopt::data {

Dataset synth_classification(std::uint64_t seed, std::size_t n, std::size_t features,
                             std::size_t classes, double margin) {
  if (n < 1 || features < 1 || classes < 1) {
    throw std::invalid_argument("synth_classification: n, features, classes must be >= 1");
  }
  core::SeededRng rng(seed, /*stream=*/0xDA7A);

  // Class centers: axis-aligned when they fit, random unit directions beyond.
  std::vector<double> centers(classes * features, 0.0);
  for (std::size_t c = 0; c < classes; ++c) {
    if (c < features) {
      centers[c * features + c] = margin;
    } else {
      double norm_sq = 0.0;
      for (std::size_t f = 0; f < features; ++f) {
        const double g = rng.next_gaussian();
        centers[c * features + f] = g;
        norm_sq += g * g;
      }
      const double scale = margin / std::sqrt(norm_sq);
      for (std::size_t f = 0; f < features; ++f) centers[c * features + f] *= scale;
    }
  }

  Dataset ds;
  ds.num_features = features;
  ds.num_classes = classes;
  ds.features.resize(n * features);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % classes;
    ds.labels[i] = static_cast<int>(c);
    for (std::size_t f = 0; f < features; ++f) {
      ds.features[i * features + f] = centers[c * features + f] + rng.next_gaussian();
    }
  }
  ds.validate();
  return ds;
}

}  // namespace dpopt::data
