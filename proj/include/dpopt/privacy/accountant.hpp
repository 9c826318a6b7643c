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

#ifndef DPOPT_PRIVACY_ACCOUNTANT_HPP_
#define DPOPT_PRIVACY_ACCOUNTANT_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "dpopt/core/vec.hpp"

namespace dpopt::privacy {

/// Classic Gaussian-mechanism calibration for a single release:
///   sigma = sensitivity * sqrt(2 ln(1.25/delta)) / eps.
double gaussian_sigma_for(double sensitivity, double eps, double delta);

/// Closed-form noise multiplier for T steps of subsampled private SGD:
///   sigma = 2 q sqrt(T ln(1/delta)) / eps.
double dpsgd_sigma(double eps, double delta, double q, double steps);

/// Inverse of dpsgd_sigma: eps = 2 q sqrt(T ln(1/delta)) / sigma.
/// steps == 0 reports zero spend. Round-trips with dpsgd_sigma to
/// machine precision.
double dpsgd_epsilon(double sigma, double delta, double q, double steps);

/// Renyi-to-approximate-DP conversion: eps_dp = rdp_eps + log(1/delta)/(order-1).
/// Requires order > 1 and delta in (0, 1].
double rdp_to_dp(double order, double rdp_eps, double delta);

/// Per-step Renyi guarantee sampled on a grid of orders.
struct RdpCurve {
  std::vector<double> orders;  // strictly increasing, all > 1
  std::vector<double> eps;     // finite, >= 0, same length

  void validate() const;

  /// Per-step bound for the subsampled Gaussian mechanism at the given
  /// orders: eps(order) = q^2 (order - 1) / sigma^2, the moment-accountant
  /// bound expressed at Renyi order `order`.
  static RdpCurve subsampled_gaussian_bound(double q, double sigma,
                                            std::vector<double> orders);

  /// Pointwise sum (grids must match): composing two mechanisms adds their
  /// Renyi curves.
  static RdpCurve add(const RdpCurve& a, const RdpCurve& b);
};

/// Standard order grid: {1.25, 1.5} plus the integers 2..256.
std::vector<double> default_rdp_orders();

/// Scales every grid point by `steps` (Renyi additivity across identical
/// steps), converts each through rdp_to_dp, and returns the smallest eps.
double compose_and_convert(const RdpCurve& per_step, double steps, double delta);

/// Grid accountant for T steps of the subsampled Gaussian mechanism.
/// Besides the default grid it evaluates the analytically optimal order for
/// (q, sigma, steps, delta), so the result never exceeds the dpsgd_epsilon
/// closed form (which is the unconstrained optimum of the same objective).
double grid_epsilon(double q, double sigma, double steps, double delta);

/// Amplification by running a DP mechanism on a uniform q-fraction:
///   eps' = log(1 + q (e^eps - 1)), delta' = q delta.
std::pair<double, double> amplify_by_subsampling(double eps, double delta, double q);

/// The single source of truth for a run's budget: (q, sigma, delta) fixed at
/// construction, steps ticked once per noisy aggregation.
class PrivacyLedger {
 public:
  PrivacyLedger(double q, double sigma, double delta);

  void tick() { ++steps_; }
  long steps() const { return steps_; }
  double q() const { return q_; }
  double sigma() const { return sigma_; }
  double delta() const { return delta_; }

  /// Closed-form (default reporting) spend so far.
  double epsilon() const;
  /// Grid-accountant spend so far.
  double epsilon_grid() const;

 private:
  double q_;
  double sigma_;
  double delta_;
  long steps_ = 0;
};

/// Budget of the masked mechanism. A fixed, data-independent mask is
/// post-processing: the reported eps is identical to the unmasked mechanism
/// with the same (q, sigma, steps, delta), for every mask.
double masked_mechanism_budget(const PrivacyLedger& ledger, const core::BinaryMask& mask);

}  // namespace dpopt::privacy

#endif  // DPOPT_PRIVACY_ACCOUNTANT_HPP_
