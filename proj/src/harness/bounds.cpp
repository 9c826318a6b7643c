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

#include "dpopt/harness/bounds.hpp"

#include <cmath>
#include <cstdio>

#include "dpopt/core/rng.hpp"
#include "dpopt/core/vec.hpp"
#include "dpopt/data/sampler.hpp"
#include "dpopt/optim/pipeline.hpp"

namespace dpopt::harness {

namespace {

constexpr double kSlack = 1e-9;
constexpr double kSmoothness = 1.0;  // G for L(theta) = ||theta||^2 / 2

std::string describe(double lhs, double rhs) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "lhs=%.9f rhs=%.9f margin=%.9f", lhs, rhs, rhs - lhs);
  return buf;
}

}  // namespace

double masked_bound_rhs(double alpha_min, double delta_loss, double sigma_g_sq,
                        std::size_t dim, std::size_t batch, long steps, double sigma) {
  const double t = static_cast<double>(steps);
  const double b = static_cast<double>(batch);
  return 2.0 * kSmoothness * delta_loss / (alpha_min * std::sqrt(t)) +
         (sigma_g_sq / b + static_cast<double>(dim) * sigma * sigma / (b * b)) /
             std::sqrt(t);
}

BoundReport check_bound_clipped_sgd(const ClippedSgdBoundConfig& config) {
  // All batch members share the loss ||theta||^2/2, so the per-sample
  // gradient is theta, min L = 0, and the clipped batch mean is
  // clip(theta, C). Noise enters the update but not the reported inner
  // product, matching the mechanism whose descent is being bounded.
  const std::size_t d = config.dim;
  core::SeededRng rng(config.seed, 21);
  core::ParamVector theta(d, config.theta1_coord);

  const double loss_start = 0.5 * core::dot(theta, theta);
  double inner_sum = 0.0;
  for (long t = 0; t < config.steps; ++t) {
    const core::ParamVector clipped = optim::clip_per_sample(theta, config.clip);
    inner_sum += core::dot(theta, clipped);
    core::ParamVector update = clipped;
    if (config.sigma > 0.0) {
      const core::ParamVector noise =
          core::gaussian_vector(rng, d, config.sigma * config.clip);
      for (std::size_t j = 0; j < d; ++j) {
        update[j] += noise[j] / static_cast<double>(config.batch);
      }
    }
    for (std::size_t j = 0; j < d; ++j) theta[j] -= config.lr * update[j];
  }

  const double steps = static_cast<double>(config.steps);
  BoundReport report;
  report.lhs = inner_sum / steps;
  report.rhs = loss_start / (steps * config.lr) +
               config.lr * kSmoothness * config.clip * config.clip / (2.0 * steps);
  report.pass = report.lhs <= report.rhs + kSlack;
  report.detail = describe(report.lhs, report.rhs);
  return report;
}

BoundReport check_bound_masked_sgd(const MaskedSgdBoundConfig& config) {
  const std::size_t d = config.dim;
  const double steps = static_cast<double>(config.steps);
  const double lr = 1.0 / (kSmoothness * std::sqrt(steps));

  // Population of per-sample quadratic bowls ||theta - c_i||^2/2 with the
  // offsets centered, so grad L(theta) = theta, min L is exact, and the
  // per-sample deviation is exactly -c_i.
  core::SeededRng offset_rng(config.seed, 22);
  std::vector<core::ParamVector> offsets(config.population);
  core::ParamVector mean(d, 0.0);
  for (auto& c : offsets) {
    c = core::gaussian_vector(offset_rng, d, config.offset_scale);
    for (std::size_t j = 0; j < d; ++j) mean[j] += c[j];
  }
  for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(config.population);
  double sigma_g_sq = 0.0;
  double offset_energy = 0.0;
  for (auto& c : offsets) {
    for (std::size_t j = 0; j < d; ++j) c[j] -= mean[j];
    const double norm = core::l2_norm(c);
    sigma_g_sq = std::max(sigma_g_sq, norm * norm);
    offset_energy += norm * norm;
  }
  const double min_loss = 0.5 * offset_energy / static_cast<double>(config.population);

  core::ParamVector theta(d, config.theta1_coord);
  const double loss_start = 0.5 * core::dot(theta, theta) + min_loss;

  const std::size_t k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(config.retention * static_cast<double>(d))));
  const core::BinaryMask mask = core::topk_mask(theta, k);

  core::SeededRng noise_rng(config.seed, 23);
  data::BatchSampler sampler(core::SeededRng(config.seed, 24), config.population,
                             config.batch);

  double grad_norm_sq_sum = 0.0;
  double alpha_min = 1.0;
  for (long t = 0; t < config.steps; ++t) {
    // grad L(theta) = theta for the centered population.
    const double norm_sq = core::dot(theta, theta);
    grad_norm_sq_sum += norm_sq;
    if (norm_sq > 0.0) {
      alpha_min = std::min(alpha_min, core::energy_retention(theta, mask));
    }

    const auto batch = sampler.next_batch();
    core::ParamVector direction(theta.begin(), theta.end());
    for (const std::size_t idx : batch) {
      for (std::size_t j = 0; j < d; ++j) {
        direction[j] -= offsets[idx][j] / static_cast<double>(config.batch);
      }
    }
    if (config.sigma > 0.0) {
      const core::ParamVector noise = core::gaussian_vector(noise_rng, d, config.sigma);
      for (std::size_t j = 0; j < d; ++j) {
        direction[j] += noise[j] / static_cast<double>(config.batch);
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (mask.on(j)) theta[j] -= lr * direction[j];
    }
  }

  const double delta_loss = loss_start - min_loss;
  BoundReport report;
  report.lhs = grad_norm_sq_sum / steps;
  report.alpha_min = alpha_min;
  report.delta_loss = delta_loss;
  report.sigma_g_sq = sigma_g_sq;
  report.rhs = masked_bound_rhs(alpha_min, delta_loss, sigma_g_sq, d, config.batch,
                                config.steps, config.sigma);
  report.pass = report.lhs <= report.rhs + kSlack;
  report.detail = describe(report.lhs, report.rhs);
  return report;
}

std::vector<BoundReport> clipped_sgd_bound_grid() {
  std::vector<BoundReport> reports;
  for (double clip : {5.0, 10.0, 20.0}) {
    for (double sigma : {0.0, 0.5, 1.0}) {
      ClippedSgdBoundConfig config;
      config.clip = clip;
      config.sigma = sigma;
      reports.push_back(check_bound_clipped_sgd(config));
    }
  }
  return reports;
}

std::vector<BoundReport> masked_sgd_bound_grid() {
  std::vector<BoundReport> reports;
  for (double retention : {0.3, 0.6, 1.0}) {
    for (double sigma : {0.0, 0.5, 1.0}) {
      MaskedSgdBoundConfig config;
      config.retention = retention;
      config.sigma = sigma;
      reports.push_back(check_bound_masked_sgd(config));
    }
  }
  return reports;
}

}  // namespace dpopt::harness
