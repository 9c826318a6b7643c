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

#ifndef DPOPT_CORE_VEC_HPP_
#define DPOPT_CORE_VEC_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dpopt/core/rng.hpp"

namespace dpopt::core {

/// Flat parameter/gradient vector. All public operations keep entries finite.
/// Reductions run in fixed left-to-right order so seeded runs reproduce
/// bit-for-bit.
using ParamVector = std::vector<double>;

/// Dense 0/1 coordinate mask with a cached popcount.
struct BinaryMask {
  std::vector<std::uint8_t> bits;
  std::size_t ones_count = 0;

  BinaryMask() = default;
  explicit BinaryMask(std::vector<std::uint8_t> b);

  static BinaryMask all_ones(std::size_t d);
  std::size_t size() const { return bits.size(); }
  bool on(std::size_t i) const { return bits[i] != 0; }
};

/// Throws std::domain_error if any entry of v is NaN or infinite.
void require_finite(std::span<const double> v, const char* what);

/// sqrt(sum v_i^2), left-to-right. Rejects non-finite input.
double l2_norm(std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);

/// Mask selecting the k coordinates of largest |v_i|.
/// Ties break toward the lower index. Requires 1 <= k <= v.size().
BinaryMask topk_mask(std::span<const double> v, std::size_t k);

/// ||m (.) v||^2 / ||v||^2 in [0,1]. Undefined (throws) for the zero vector.
double energy_retention(std::span<const double> v, const BinaryMask& m);

/// Elementwise m_i * v_i. Lengths must match.
ParamVector masked_apply(const BinaryMask& m, std::span<const double> v);

/// d i.i.d. draws from N(0, stddev^2). stddev == 0 returns exact zeros
/// without advancing the generator.
ParamVector gaussian_vector(SeededRng& rng, std::size_t d, double stddev);

}  // namespace dpopt::core

#endif  // DPOPT_CORE_VEC_HPP_
