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

#ifndef DPOPT_HARNESS_BOUNDS_HPP_
#define DPOPT_HARNESS_BOUNDS_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace dpopt::harness {

// Convergence bound checks run on a quadratic objective where the smoothness
// constant (G = 1) and the minimum loss are exact, so the right-hand sides
// can be evaluated in closed form.

struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  std::string detail;
  // Empirical ingredients of the rhs (masked check only), exposed so the
  // bound's algebra can be probed with everything else held fixed.
  double alpha_min = 1.0;
  double delta_loss = 0.0;
  double sigma_g_sq = 0.0;
};

/// rhs of the masked bound from its ingredients:
///   2 G delta_loss / (alpha_min sqrt(T)) + (sigma_g^2/B + d sigma^2/B^2)/sqrt(T).
double masked_bound_rhs(double alpha_min, double delta_loss, double sigma_g_sq,
                        std::size_t dim, std::size_t batch, long steps, double sigma);

/// Clipped-SGD descent check: simulates T clipped (optionally noised) steps
/// from theta1 and verifies
///   (1/T) sum_t <grad L(theta_t), clipped mean g_t>
///     <= (L(theta1) - min L) / (T eta) + eta G C^2 / (2T) + 1e-9.
struct ClippedSgdBoundConfig {
  std::size_t dim = 4;
  double theta1_coord = 0.5;  // theta1 = theta1_coord * (1, ..., 1)
  double clip = 10.0;
  double sigma = 0.0;  // DP noise multiplier on the aggregated gradient
  double lr = 0.1;
  long steps = 100;
  std::size_t batch = 100;
  std::uint64_t seed = 7;
};
BoundReport check_bound_clipped_sgd(const ClippedSgdBoundConfig& config);

/// Masked noisy-SGD gradient-norm check with lr = 1/(G sqrt(T)):
///   (1/T) sum_t ||grad L(theta_t)||^2
///     <= 2G (L(theta1) - min L) / (alpha_min sqrt(T))
///        + (sigma_g^2/B + d sigma^2/B^2) / sqrt(T) + 1e-9,
/// where alpha_min is the run's smallest mask energy retention and sigma_g^2
/// bounds the per-sample gradient deviation.
struct MaskedSgdBoundConfig {
  std::size_t dim = 10;
  double theta1_coord = 0.5;
  double retention = 0.5;
  double sigma = 1.0;      // additive gaussian noise stddev (pre-average)
  std::size_t batch = 16;
  long steps = 400;
  std::size_t population = 64;  // per-sample offset pool
  double offset_scale = 0.2;
  std::uint64_t seed = 11;
};
BoundReport check_bound_masked_sgd(const MaskedSgdBoundConfig& config);

/// 3x3 grids over (clip, sigma) and (retention, sigma); every cell must pass.
std::vector<BoundReport> clipped_sgd_bound_grid();
std::vector<BoundReport> masked_sgd_bound_grid();

}  // namespace dpopt::harness

#endif  // DPOPT_HARNESS_BOUNDS_HPP_
