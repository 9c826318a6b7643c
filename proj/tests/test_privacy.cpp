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

#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "dpopt/core/rng.hpp"
#include "dpopt/core/vec.hpp"
#include "dpopt/privacy/accountant.hpp"

namespace dp = dpopt::privacy;

TEST_SUITE("privacy") {

TEST_CASE("gaussian mechanism calibration") {
  // sqrt(2 ln(1.25e5)) evaluated independently.
  CHECK(dp::gaussian_sigma_for(1.0, 1.0, 1e-5) ==
        doctest::Approx(4.8448052626053894).epsilon(1e-14));
  CHECK(dp::gaussian_sigma_for(2.0, 1.0, 1e-5) ==
        doctest::Approx(2.0 * 4.8448052626053894).epsilon(1e-14));
  // eps -> infinity drives sigma -> 0
  CHECK(dp::gaussian_sigma_for(1.0, 1e9, 1e-5) < 1e-8);
  CHECK_THROWS_AS(dp::gaussian_sigma_for(0.0, 1.0, 1e-5), std::invalid_argument);
  CHECK_THROWS_AS(dp::gaussian_sigma_for(1.0, -1.0, 1e-5), std::invalid_argument);
}

TEST_CASE("dpsgd noise multiplier closed form") {
  CHECK(dp::dpsgd_sigma(2.0, 1e-5, 0.01, 1000) ==
        doctest::Approx(1.0729830131446736).epsilon(1e-14));
  // sqrt(T) and 1/eps scalings
  CHECK(dp::dpsgd_sigma(2.0, 1e-5, 0.01, 4000) ==
        doctest::Approx(2.0 * 1.0729830131446736).epsilon(1e-14));
  CHECK(dp::dpsgd_sigma(1.0, 1e-5, 0.01, 1000) ==
        doctest::Approx(2.0 * 1.0729830131446736).epsilon(1e-14));
  CHECK_THROWS_AS(dp::dpsgd_sigma(2.0, 1e-5, 1.5, 1000), std::invalid_argument);
}

TEST_CASE("dpsgd epsilon inverts the sigma formula") {
  CHECK(dp::dpsgd_epsilon(1.0729830131446736, 1e-5, 0.01, 1000) ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(dp::dpsgd_epsilon(1.0, 1e-5, 0.01, 0) == 0.0);
  CHECK(dp::dpsgd_epsilon(1e12, 1e-5, 0.01, 1000) < 1e-9);
}

TEST_CASE("round trip sigma <-> eps stays within 1e-12 relative") {
  dpopt::core::SeededRng rng(61);
  for (int trial = 0; trial < 1000; ++trial) {
    const double eps = 0.05 + 10.0 * rng.next_double();
    const double delta = std::pow(10.0, -7.0 + 5.0 * rng.next_double());
    const double q = 0.001 + 0.999 * rng.next_double();
    const double steps = 1.0 + std::floor(rng.next_double() * 100000.0);
    const double sigma = dp::dpsgd_sigma(eps, delta, q, steps);
    const double back = dp::dpsgd_epsilon(sigma, delta, q, steps);
    CHECK(std::abs(back - eps) <= 1e-12 * eps);
  }
}

TEST_CASE("rdp to dp conversion") {
  CHECK(dp::rdp_to_dp(2.0, 1.0, 1e-5) ==
        doctest::Approx(12.512925464970228).epsilon(1e-14));
  CHECK(dp::rdp_to_dp(2.0, 0.7, 1.0) == 0.7);  // log(1/1) = 0
  // larger order, same rdp eps -> smaller conversion overhead
  CHECK(dp::rdp_to_dp(64.0, 1.0, 1e-5) < dp::rdp_to_dp(2.0, 1.0, 1e-5));
  CHECK_THROWS_AS(dp::rdp_to_dp(1.0, 1.0, 1e-5), std::invalid_argument);
}

TEST_CASE("compose_and_convert degenerate grid equals direct conversion") {
  dp::RdpCurve curve;
  curve.orders = {8.0};
  curve.eps = {0.03};
  const double got = dp::compose_and_convert(curve, 50, 1e-5);
  CHECK(got == doctest::Approx(50 * 0.03 + std::log(1e5) / 7.0).epsilon(1e-14));
}

TEST_CASE("compose_and_convert rejects an empty grid") {
  dp::RdpCurve curve;
  CHECK_THROWS_AS(dp::compose_and_convert(curve, 10, 1e-5), std::invalid_argument);
}

TEST_CASE("composing T steps equals adding T single-step curves") {
  const auto orders = dp::default_rdp_orders();
  const auto one = dp::RdpCurve::subsampled_gaussian_bound(0.02, 1.3, orders);
  const auto two = dp::RdpCurve::add(one, one);
  CHECK(dp::compose_and_convert(one, 2, 1e-5) ==
        doctest::Approx(dp::compose_and_convert(two, 1, 1e-5)).epsilon(1e-15));
}

TEST_CASE("grid accountant never beats nor exceeds the closed form meaningfully") {
  // The closed form is the unconstrained optimum of the grid objective; with
  // the optimal order included the two agree to rounding.
  dpopt::core::SeededRng rng(62);
  for (int trial = 0; trial < 300; ++trial) {
    const double q = 0.001 + 0.2 * rng.next_double();
    const double sigma = 0.5 + 4.0 * rng.next_double();
    const double steps = 1.0 + std::floor(rng.next_double() * 20000.0);
    const double delta = std::pow(10.0, -7.0 + 4.0 * rng.next_double());
    const double closed = dp::dpsgd_epsilon(sigma, delta, q, steps);
    const double grid = dp::grid_epsilon(q, sigma, steps, delta);
    CHECK(grid <= closed * (1.0 + 1e-12));
    CHECK(grid >= closed * (1.0 - 1e-12));
  }
}

TEST_CASE("reference grid-accountant value") {
  // q=0.01, sigma=1, T=1000, delta=1e-5: closed form 2q sqrt(T ln 1e5)/sigma.
  const double closed = dp::dpsgd_epsilon(1.0, 1e-5, 0.01, 1000);
  CHECK(closed == doctest::Approx(2.1459660262893472).epsilon(1e-14));
  CHECK(dp::grid_epsilon(0.01, 1.0, 1000, 1e-5) <= closed * (1.0 + 1e-12));
}

TEST_CASE("accountants agree within 5% on the noise-preset regimes") {
  // 60k-sample training at B=500 over 20..120 epochs with the preset noise
  // multipliers; closed form and grid accountant must stay within 5%.
  const double q = 500.0 / 60000.0;
  for (double sigma : {4.64, 2.49, 1.79, 1.45, 1.25, 1.12}) {
    for (double steps : {2400.0, 4800.0, 14400.0}) {
      const double closed = dp::dpsgd_epsilon(sigma, 1e-5, q, steps);
      const double grid = dp::grid_epsilon(q, sigma, steps, 1e-5);
      CHECK(std::abs(grid - closed) / closed <= 0.05);
    }
  }
}

TEST_CASE("epsilon monotonicity in steps, q, and sigma") {
  double prev = 0.0;
  for (double steps : {10.0, 100.0, 1000.0, 10000.0}) {
    const double eps = dp::dpsgd_epsilon(1.0, 1e-5, 0.01, steps);
    CHECK(eps > prev);
    prev = eps;
  }
  prev = 0.0;
  for (double q : {0.001, 0.01, 0.1, 1.0}) {
    const double eps = dp::dpsgd_epsilon(1.0, 1e-5, q, 100);
    CHECK(eps > prev);
    prev = eps;
  }
  prev = 1e300;
  for (double sigma : {0.5, 1.0, 2.0, 4.0}) {
    const double eps = dp::dpsgd_epsilon(sigma, 1e-5, 0.01, 100);
    CHECK(eps < prev);
    prev = eps;
  }
}

TEST_CASE("subsampling amplification") {
  CHECK(dp::amplify_by_subsampling(0.0, 1e-5, 0.3).first == 0.0);
  const auto unchanged = dp::amplify_by_subsampling(1.2, 1e-5, 1.0);
  CHECK(unchanged.first == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(unchanged.second == doctest::Approx(1e-5).epsilon(1e-14));
  const auto amplified = dp::amplify_by_subsampling(1.0, 1e-5, 0.1);
  CHECK(amplified.first == doctest::Approx(0.15856507874042911).epsilon(1e-14));
  CHECK(amplified.second == doctest::Approx(1e-6).epsilon(1e-14));
}

TEST_CASE("amplification is linear in q for small eps") {
  for (double eps : {0.01, 0.005, 0.001}) {
    for (double q : {0.5, 0.1, 0.01}) {
      const double amplified = dp::amplify_by_subsampling(eps, 1e-5, q).first;
      CHECK(std::abs(amplified - q * eps) / (q * eps) <= 0.01);
    }
  }
}

TEST_CASE("masked mechanism budget ignores the mask") {
  dp::PrivacyLedger ledger(0.05, 2.0, 1e-5);
  for (int i = 0; i < 400; ++i) ledger.tick();
  const auto all = dpopt::core::BinaryMask::all_ones(16);
  dpopt::core::BinaryMask one(std::vector<std::uint8_t>(16, 0));
  one.bits[3] = 1;
  one.ones_count = 1;
  dpopt::core::BinaryMask half(std::vector<std::uint8_t>{1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1,
                                                         0, 1, 0, 1, 0});
  const double reference = ledger.epsilon();
  CHECK(dp::masked_mechanism_budget(ledger, all) == reference);
  CHECK(dp::masked_mechanism_budget(ledger, one) == reference);
  CHECK(dp::masked_mechanism_budget(ledger, half) == reference);
}

TEST_CASE("ledger epsilon is nondecreasing in ticks") {
  dp::PrivacyLedger ledger(0.02, 1.5, 1e-5);
  double prev = ledger.epsilon();
  CHECK(prev == 0.0);
  for (int i = 0; i < 32; ++i) {
    ledger.tick();
    const double eps = ledger.epsilon();
    CHECK(eps > prev);
    prev = eps;
  }
}

}  // TEST_SUITE
