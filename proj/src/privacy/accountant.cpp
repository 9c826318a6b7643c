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

#include "dpopt/privacy/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dpopt::privacy {

namespace {

void check_delta(double delta, bool allow_one) {
  const bool ok = delta > 0.0 && (allow_one ? delta <= 1.0 : delta < 1.0);
  if (!ok) {
    throw std::invalid_argument("accountant: delta must lie in (0, 1" +
                                std::string(allow_one ? "]" : ")"));
  }
}

void check_q(double q) {
  if (!(q > 0.0) || q > 1.0) {
    throw std::invalid_argument("accountant: sampling rate q must lie in (0, 1]");
  }
}

}  // namespace

double gaussian_sigma_for(double sensitivity, double eps, double delta) {
  if (!(sensitivity > 0.0)) {
    throw std::invalid_argument("gaussian_sigma_for: sensitivity must be positive");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("gaussian_sigma_for: eps must be positive");
  }
  check_delta(delta, /*allow_one=*/false);
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / eps;
}

double dpsgd_sigma(double eps, double delta, double q, double steps) {
  if (!(eps > 0.0)) throw std::invalid_argument("dpsgd_sigma: eps must be positive");
  if (!(steps > 0.0)) throw std::invalid_argument("dpsgd_sigma: steps must be positive");
  check_delta(delta, /*allow_one=*/false);
  check_q(q);
  return 2.0 * q * std::sqrt(steps * std::log(1.0 / delta)) / eps;
}

double dpsgd_epsilon(double sigma, double delta, double q, double steps) {
  if (steps == 0.0) return 0.0;
  if (!(sigma > 0.0)) throw std::invalid_argument("dpsgd_epsilon: sigma must be positive");
  if (!(steps > 0.0)) throw std::invalid_argument("dpsgd_epsilon: steps must be >= 0");
  check_delta(delta, /*allow_one=*/false);
  check_q(q);
  return 2.0 * q * std::sqrt(steps * std::log(1.0 / delta)) / sigma;
}

double rdp_to_dp(double order, double rdp_eps, double delta) {
  if (!(order > 1.0)) throw std::invalid_argument("rdp_to_dp: order must exceed 1");
  if (rdp_eps < 0.0) throw std::invalid_argument("rdp_to_dp: rdp_eps must be >= 0");
  check_delta(delta, /*allow_one=*/true);
  return rdp_eps + std::log(1.0 / delta) / (order - 1.0);
}

void RdpCurve::validate() const {
  if (orders.empty() || orders.size() != eps.size()) {
    throw std::invalid_argument("RdpCurve: empty or mismatched grid");
  }
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (!(orders[i] > 1.0)) {
      throw std::invalid_argument("RdpCurve: orders must exceed 1");
    }
    if (i > 0 && !(orders[i] > orders[i - 1])) {
      throw std::invalid_argument("RdpCurve: orders must be strictly increasing");
    }
    if (!std::isfinite(eps[i]) || eps[i] < 0.0) {
      throw std::invalid_argument("RdpCurve: eps must be finite and >= 0");
    }
  }
}

RdpCurve RdpCurve::subsampled_gaussian_bound(double q, double sigma,
                                             std::vector<double> orders) {
  check_q(q);
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("subsampled_gaussian_bound: sigma must be positive");
  }
  RdpCurve curve;
  curve.orders = std::move(orders);
  curve.eps.reserve(curve.orders.size());
  for (double order : curve.orders) {
    curve.eps.push_back(q * q * (order - 1.0) / (sigma * sigma));
  }
  curve.validate();
  return curve;
}

RdpCurve RdpCurve::add(const RdpCurve& a, const RdpCurve& b) {
  a.validate();
  b.validate();
  if (a.orders != b.orders) {
    throw std::invalid_argument("RdpCurve::add: grids must use identical orders");
  }
  RdpCurve out = a;
  for (std::size_t i = 0; i < out.eps.size(); ++i) out.eps[i] += b.eps[i];
  return out;
}

std::vector<double> default_rdp_orders() {
  std::vector<double> orders = {1.25, 1.5};
  for (int a = 2; a <= 256; ++a) orders.push_back(static_cast<double>(a));
  return orders;
}

double compose_and_convert(const RdpCurve& per_step, double steps, double delta) {
  per_step.validate();
  if (!(steps >= 1.0)) {
    throw std::invalid_argument("compose_and_convert: steps must be >= 1");
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < per_step.orders.size(); ++i) {
    best = std::min(best, rdp_to_dp(per_step.orders[i], steps * per_step.eps[i], delta));
  }
  return best;
}

double grid_epsilon(double q, double sigma, double steps, double delta) {
  if (steps == 0.0) return 0.0;
  check_delta(delta, /*allow_one=*/false);
  auto orders = default_rdp_orders();
  // The conversion objective T q^2 (o-1)/sigma^2 + log(1/delta)/(o-1) is
  // minimized at o* = 1 + sigma sqrt(log(1/delta)/T)/q; include it so the
  // grid minimum attains the closed-form optimum instead of the nearest
  // integer order.
  const double opt = 1.0 + sigma * std::sqrt(std::log(1.0 / delta) / steps) / q;
  orders.push_back(opt);
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  const RdpCurve curve = RdpCurve::subsampled_gaussian_bound(q, sigma, std::move(orders));
  return compose_and_convert(curve, steps, delta);
}

std::pair<double, double> amplify_by_subsampling(double eps, double delta, double q) {
  check_q(q);
  if (eps < 0.0) throw std::invalid_argument("amplify_by_subsampling: eps must be >= 0");
  // log1p keeps the small-eps regime (eps' ~ q eps) accurate.
  const double amplified = std::log1p(q * std::expm1(eps));
  return {amplified, q * delta};
}

PrivacyLedger::PrivacyLedger(double q, double sigma, double delta)
    : q_(q), sigma_(sigma), delta_(delta) {
  check_q(q);
  if (!(sigma > 0.0)) throw std::invalid_argument("PrivacyLedger: sigma must be positive");
  check_delta(delta, /*allow_one=*/false);
}

double PrivacyLedger::epsilon() const {
  return dpsgd_epsilon(sigma_, delta_, q_, static_cast<double>(steps_));
}

double PrivacyLedger::epsilon_grid() const {
  return grid_epsilon(q_, sigma_, static_cast<double>(steps_), delta_);
}

double masked_mechanism_budget(const PrivacyLedger& ledger, const core::BinaryMask& mask) {
  (void)mask;  // post-processing: the budget does not depend on the mask
  return ledger.epsilon();
}

}  // namespace dpopt::privacy
