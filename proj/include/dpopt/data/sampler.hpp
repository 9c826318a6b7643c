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

#ifndef DPOPT_DATA_SAMPLER_HPP_
#define DPOPT_DATA_SAMPLER_HPP_

#include <cstddef>
#include <vector>

#include "dpopt/core/rng.hpp"

namespace dpopt::data {

/// Fixed-size uniform sampling without replacement: every batch is B distinct
/// indices in [0, N), giving each index marginal inclusion probability B/N
/// per step. Single-owner mutable state (owns its generator).
class BatchSampler {
 public:
  BatchSampler(core::SeededRng rng, std::size_t n, std::size_t b);

  std::vector<std::size_t> next_batch();

  std::size_t dataset_size() const { return n_; }
  std::size_t batch_size() const { return b_; }

 private:
  core::SeededRng rng_;
  std::size_t n_;
  std::size_t b_;
  std::vector<std::size_t> pool_;
};

}  // namespace dpopt::data

#endif  // DPOPT_DATA_SAMPLER_HPP_
