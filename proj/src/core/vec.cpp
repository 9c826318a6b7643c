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

#include "dpopt/core/vec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dpopt::core {

BinaryMask::BinaryMask(std::vector<std::uint8_t> b) : bits(std::move(b)) {
  for (auto v : bits) {
    if (v > 1) throw std::invalid_argument("BinaryMask: entries must be 0 or 1");
    ones_count += v;
  }
}

BinaryMask BinaryMask::all_ones(std::size_t d) {
  BinaryMask m;
  m.bits.assign(d, 1);
  m.ones_count = d;
  return m;
}

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw std::domain_error(std::string(what) + ": non-finite entry at index " +
                              std::to_string(i));
    }
  }
}

double l2_norm(std::span<const double> v) {
  require_finite(v, "l2_norm");
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

BinaryMask topk_mask(std::span<const double> v, std::size_t k) {
  require_finite(v, "topk_mask");
  const std::size_t d = v.size();
  if (k < 1 || k > d) {
    throw std::invalid_argument("topk_mask: k=" + std::to_string(k) +
                                " out of range [1, " + std::to_string(d) + "]");
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // stable sort on ascending index keeps the lower index first among ties
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(v[a]) > std::abs(v[b]);
  });
  BinaryMask m;
  m.bits.assign(d, 0);
  for (std::size_t i = 0; i < k; ++i) m.bits[order[i]] = 1;
  m.ones_count = k;
  return m;
}

double energy_retention(std::span<const double> v, const BinaryMask& m) {
  if (m.size() != v.size()) {
    throw std::invalid_argument("energy_retention: length mismatch");
  }
  require_finite(v, "energy_retention");
  double total = 0.0;
  double kept = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double sq = v[i] * v[i];
    total += sq;
    if (m.on(i)) kept += sq;
  }
  if (total == 0.0) {
    throw std::domain_error("energy_retention: undefined for the zero vector");
  }
  return kept / total;
}

ParamVector masked_apply(const BinaryMask& m, std::span<const double> v) {
  if (m.size() != v.size()) {
    throw std::invalid_argument("masked_apply: length mismatch");
  }
  ParamVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = m.on(i) ? v[i] : 0.0;
  return out;
}

ParamVector gaussian_vector(SeededRng& rng, std::size_t d, double stddev) {
  if (d < 1) throw std::invalid_argument("gaussian_vector: d must be >= 1");
  if (!(stddev >= 0.0)) {
    throw std::invalid_argument("gaussian_vector: stddev must be >= 0");
  }
  ParamVector out(d, 0.0);
  if (stddev == 0.0) return out;
  for (std::size_t i = 0; i < d; ++i) out[i] = stddev * rng.next_gaussian();
  return out;
}

}  // namespace dpopt::core
