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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "dpopt/core/rng.hpp"
#include "dpopt/core/vec.hpp"

using dpopt::core::BinaryMask;
using dpopt::core::ParamVector;
using dpopt::core::SeededRng;

namespace {

// Independent oracle: rank coordinates by |v| descending, index ascending,
// without going through topk_mask's sort.
std::vector<std::size_t> brute_force_topk(const ParamVector& v, std::size_t k) {
  std::vector<std::size_t> chosen;
  std::vector<bool> used(v.size(), false);
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t best = v.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (used[i]) continue;
      if (best == v.size() || std::abs(v[i]) > std::abs(v[best])) best = i;
    }
    used[best] = true;
    chosen.push_back(best);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

ParamVector random_vector(SeededRng& rng, std::size_t d, double scale = 1.0) {
  ParamVector v(d);
  for (auto& x : v) x = scale * rng.next_gaussian();
  return v;
}

}  // namespace

TEST_SUITE("core_math") {

TEST_CASE("l2_norm on reference vectors") {
  CHECK(dpopt::core::l2_norm(ParamVector{3, 4}) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(dpopt::core::l2_norm(ParamVector{0, 0, 0}) == 0.0);
  CHECK(dpopt::core::l2_norm(ParamVector{1, 1, 1, 1}) ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("l2_norm rejects non-finite input") {
  CHECK_THROWS_AS(dpopt::core::l2_norm(
                      ParamVector{1.0, std::numeric_limits<double>::quiet_NaN()}),
                  std::domain_error);
  CHECK_THROWS_AS(
      dpopt::core::l2_norm(ParamVector{std::numeric_limits<double>::infinity()}),
      std::domain_error);
}

TEST_CASE("topk_mask picks the largest magnitudes") {
  const auto m = dpopt::core::topk_mask(ParamVector{0.1, -0.5, 0.3, 0.0}, 2);
  CHECK(m.bits == std::vector<std::uint8_t>{0, 1, 1, 0});
  CHECK(m.ones_count == 2);

  const auto full = dpopt::core::topk_mask(ParamVector{7}, 1);
  CHECK(full.bits == std::vector<std::uint8_t>{1});
}

TEST_CASE("topk_mask breaks ties toward the lower index") {
  const auto m = dpopt::core::topk_mask(ParamVector{2, 2, 1}, 1);
  CHECK(m.bits == std::vector<std::uint8_t>{1, 0, 0});
}

TEST_CASE("topk_mask rejects out-of-range k") {
  CHECK_THROWS_AS(dpopt::core::topk_mask(ParamVector{1, 2}, 0), std::invalid_argument);
  CHECK_THROWS_AS(dpopt::core::topk_mask(ParamVector{1, 2}, 3), std::invalid_argument);
}

TEST_CASE("topk_mask matches the brute-force ranking oracle") {
  SeededRng rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 1 + rng.next_u64() % 12;
    const std::size_t k = 1 + rng.next_u64() % d;
    const ParamVector v = random_vector(rng, d);
    const auto mask = dpopt::core::topk_mask(v, k);
    std::vector<std::size_t> got;
    for (std::size_t i = 0; i < d; ++i) {
      if (mask.on(i)) got.push_back(i);
    }
    CHECK(got == brute_force_topk(v, k));
  }
}

TEST_CASE("topk_mask is permutation-consistent for distinct magnitudes") {
  SeededRng rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + rng.next_u64() % 10;
    ParamVector v(d);
    for (std::size_t i = 0; i < d; ++i) {
      v[i] = (static_cast<double>(i) + 1.0) * (rng.next_double() < 0.5 ? -1.0 : 1.0);
    }
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = d; i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.next_u64() % i]);
    }
    ParamVector shuffled(d);
    for (std::size_t i = 0; i < d; ++i) shuffled[i] = v[perm[i]];

    const std::size_t k = 1 + rng.next_u64() % d;
    const auto mask = dpopt::core::topk_mask(v, k);
    const auto mask_shuffled = dpopt::core::topk_mask(shuffled, k);
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(mask_shuffled.on(i) == mask.on(perm[i]));
    }
  }
}

TEST_CASE("energy_retention on reference vectors") {
  const ParamVector flat{1, 1, 1, 1};
  CHECK(dpopt::core::energy_retention(flat, dpopt::core::topk_mask(flat, 2)) == 0.5);

  BinaryMask first_only(std::vector<std::uint8_t>{1, 0, 0});
  CHECK(dpopt::core::energy_retention(ParamVector{5, 0, 0}, first_only) == 1.0);

  BinaryMask m10(std::vector<std::uint8_t>{1, 0});
  CHECK(dpopt::core::energy_retention(ParamVector{3, 4}, m10) ==
        doctest::Approx(0.36).epsilon(1e-15));
}

TEST_CASE("energy_retention rejects the zero vector") {
  BinaryMask m(std::vector<std::uint8_t>{1, 0});
  CHECK_THROWS_AS(dpopt::core::energy_retention(ParamVector{0, 0}, m), std::domain_error);
}

TEST_CASE("masked energy identity holds exactly") {
  // <v, m (.) v> and ||m (.) v||^2 evaluate the same products in the same
  // order, so they agree bit for bit.
  SeededRng rng(44);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t d = 1 + rng.next_u64() % 16;
    const std::size_t k = 1 + rng.next_u64() % d;
    const ParamVector v = random_vector(rng, d, 3.0);
    const auto mask = dpopt::core::topk_mask(v, k);
    const ParamVector mv = dpopt::core::masked_apply(mask, v);
    const double inner = dpopt::core::dot(v, mv);
    const double norm_sq = dpopt::core::dot(mv, mv);
    CHECK(inner == norm_sq);
  }
}

TEST_CASE("energy retention of a top-k mask is at least k/d") {
  SeededRng rng(45);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t d = 1 + rng.next_u64() % 16;
    const std::size_t k = 1 + rng.next_u64() % d;
    const ParamVector v = random_vector(rng, d);
    const auto mask = dpopt::core::topk_mask(v, k);
    double total = 0.0, kept = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      total += v[i] * v[i];
      if (mask.on(i)) kept += v[i] * v[i];
    }
    // kept * d >= k * total avoids the division entirely.
    CHECK(kept * static_cast<double>(d) >= static_cast<double>(k) * total);
  }
}

TEST_CASE("all-equal magnitudes retain exactly k/d") {
  // Magnitude 0.5 keeps every square and partial sum exactly representable,
  // so the ratio is k/d with no rounding at all.
  for (std::size_t d = 1; d <= 12; ++d) {
    ParamVector v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = i % 2 == 0 ? 0.5 : -0.5;
    for (std::size_t k = 1; k <= d; ++k) {
      const auto mask = dpopt::core::topk_mask(v, k);
      CHECK(dpopt::core::energy_retention(v, mask) ==
            static_cast<double>(k) / static_cast<double>(d));
    }
  }
  // Arbitrary equal magnitudes agree up to summation rounding.
  for (std::size_t d = 2; d <= 12; ++d) {
    ParamVector v(d, -0.7);
    for (std::size_t k = 1; k <= d; ++k) {
      const auto mask = dpopt::core::topk_mask(v, k);
      CHECK(dpopt::core::energy_retention(v, mask) ==
            doctest::Approx(static_cast<double>(k) / static_cast<double>(d))
                .epsilon(1e-14));
    }
  }
}

TEST_CASE("masked_apply on reference vectors") {
  BinaryMask m(std::vector<std::uint8_t>{1, 0});
  CHECK(dpopt::core::masked_apply(m, ParamVector{2, 3}) == ParamVector{2, 0});

  const ParamVector v{1.5, -2.5, 0.25};
  CHECK(dpopt::core::masked_apply(BinaryMask::all_ones(3), v) == v);

  BinaryMask m011(std::vector<std::uint8_t>{0, 1, 1});
  CHECK(dpopt::core::masked_apply(m011, ParamVector{9, -1, 4}) == ParamVector{0, -1, 4});

  CHECK_THROWS_AS(dpopt::core::masked_apply(m, ParamVector{1, 2, 3}),
                  std::invalid_argument);
}

TEST_CASE("gaussian_vector degenerate and determinism contracts") {
  SeededRng rng(46);
  CHECK(dpopt::core::gaussian_vector(rng, 3, 0.0) == ParamVector{0, 0, 0});

  SeededRng a(123), b(123);
  const auto va = dpopt::core::gaussian_vector(a, 32, 1.7);
  const auto vb = dpopt::core::gaussian_vector(b, 32, 1.7);
  CHECK(va == vb);

  SeededRng c(124);
  CHECK(dpopt::core::gaussian_vector(c, 32, 1.7) != va);
}

TEST_CASE("gaussian_vector empirical variance matches std^2") {
  SeededRng rng(47);
  const std::size_t n = 100000;
  const auto v = dpopt::core::gaussian_vector(rng, n, 2.0);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n);
  CHECK(var > 3.9);
  CHECK(var < 4.1);
}

TEST_CASE("gaussian_vector empirical mean is near zero") {
  SeededRng rng(48);
  const std::size_t n = 1000000;
  const double sigma = 1.0;
  const auto v = dpopt::core::gaussian_vector(rng, n, sigma);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  CHECK(std::abs(mean) <= 4.0 * sigma / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("seeded rng streams are independent and reproducible") {
  SeededRng s0(99, 0), s0_again(99, 0), s1(99, 1);
  bool any_diff = false;
  for (int i = 0; i < 16; ++i) {
    const auto a = s0.next_u64();
    CHECK(a == s0_again.next_u64());
    if (a != s1.next_u64()) any_diff = true;
  }
  CHECK(any_diff);
}

}  // TEST_SUITE
