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

#include "dpopt/data/sampler.hpp"

#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace dpopt::data {

BatchSampler::BatchSampler(core::SeededRng rng, std::size_t n, std::size_t b)
    : rng_(rng), n_(n), b_(b), pool_(n) {
  if (b < 1 || b > n) {
    throw std::invalid_argument("BatchSampler: batch size " + std::to_string(b) +
                                " out of range [1, " + std::to_string(n) + "]");
  }
  std::iota(pool_.begin(), pool_.end(), std::size_t{0});
}

std::vector<std::size_t> BatchSampler::next_batch() {
  // Partial Fisher-Yates over the persistent pool; the first b_ slots after
  // the pass are the batch.
  for (std::size_t i = 0; i < b_; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng_.next_u64() % (n_ - i));
    std::swap(pool_[i], pool_[j]);
  }
  return {pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(b_)};
}

}  // namespace dpopt::data
