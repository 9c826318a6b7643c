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

#include "dpopt/optim/pipeline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpopt::optim {

namespace {

// Norm slack for rows that were clipped in floating point.
constexpr double kClipTolerance = 1e-12;

}  // namespace

ClipState::ClipState(std::size_t d, double clip, double sigma, double mu_in, double g1,
                     double g2, double alpha0, double beta0)
    : alpha(d, alpha0),
      beta(d, beta0),
      mu(mu_in),
      gamma1(g1),
      gamma2(g2),
      clip_bound(clip),
      noise_multiplier(sigma) {
  if (!(clip > 0.0)) throw std::invalid_argument("ClipState: clip bound must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("ClipState: sigma must be >= 0");
  if (!(mu > 0.0)) throw std::invalid_argument("ClipState: mu must be positive");
  if (g1 < 0.0 || g1 > 1.0 || g2 < 0.0 || g2 > 1.0) {
    throw std::invalid_argument("ClipState: momenta must lie in [0, 1]");
  }
  if (beta0 < 0.0) throw std::invalid_argument("ClipState: beta0 must be >= 0");
}

ParamVector standardize(std::span<const double> g, const ClipState& cs) {
  if (g.size() != cs.dim()) throw std::invalid_argument("standardize: length mismatch");
  ParamVector out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[i] = (g[i] - cs.alpha[i]) / (std::sqrt(cs.beta[i]) + cs.mu);
  }
  return out;
}

ParamVector restore(std::span<const double> g_std, const ClipState& cs) {
  if (g_std.size() != cs.dim()) throw std::invalid_argument("restore: length mismatch");
  ParamVector out(g_std.size());
  for (std::size_t i = 0; i < g_std.size(); ++i) {
    out[i] = g_std[i] * (std::sqrt(cs.beta[i]) + cs.mu) + cs.alpha[i];
  }
  return out;
}

ParamVector clip_per_sample(std::span<const double> g, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("clip_per_sample: bound must be positive");
  const double norm = core::l2_norm(g);
  ParamVector out(g.begin(), g.end());
  if (norm <= c) return out;  // inside the ball: exact pass-through
  const double scale = c / norm;
  for (auto& v : out) v *= scale;
  return out;
}

ParamVector noisy_aggregate(const GradBatch& rows, const BinaryMask& mask,
                            const ClipState& cs, core::SeededRng& rng,
                            std::size_t batch_size) {
  if (rows.count != batch_size || batch_size == 0) {
    throw std::invalid_argument("noisy_aggregate: row count must equal the batch size");
  }
  if (rows.dim != mask.size() || rows.dim != cs.dim()) {
    throw std::invalid_argument("noisy_aggregate: dimension mismatch");
  }
  const double bound = cs.clip_bound * (1.0 + kClipTolerance);
  for (std::size_t i = 0; i < rows.count; ++i) {
    const auto row = rows.row(i);
    if (core::l2_norm(row) > bound) {
      throw std::logic_error("noisy_aggregate: row " + std::to_string(i) +
                             " exceeds the clip bound (contract breach upstream)");
    }
    for (std::size_t j = 0; j < rows.dim; ++j) {
      if (!mask.on(j) && row[j] != 0.0) {
        throw std::logic_error("noisy_aggregate: row " + std::to_string(i) +
                               " has support off the mask at coordinate " +
                               std::to_string(j));
      }
    }
  }

  ParamVector sum(rows.dim, 0.0);
  for (std::size_t i = 0; i < rows.count; ++i) {
    const auto row = rows.row(i);
    for (std::size_t j = 0; j < rows.dim; ++j) sum[j] += row[j];
  }
  if (cs.noise_multiplier > 0.0) {
    const ParamVector noise =
        core::gaussian_vector(rng, rows.dim, cs.noise_multiplier * cs.clip_bound);
    for (std::size_t j = 0; j < rows.dim; ++j) {
      if (mask.on(j)) sum[j] += noise[j];
    }
  }
  const double inv_b = 1.0 / static_cast<double>(batch_size);
  for (auto& v : sum) v *= inv_b;
  return sum;
}

void ema_update(ClipState& cs, std::span<const double> g_hat) {
  if (g_hat.size() != cs.dim()) throw std::invalid_argument("ema_update: length mismatch");
  for (std::size_t i = 0; i < g_hat.size(); ++i) {
    const double old_alpha = cs.alpha[i];
    cs.alpha[i] = cs.gamma1 * old_alpha + (1.0 - cs.gamma1) * g_hat[i];
    const double dev = g_hat[i] - old_alpha;
    cs.beta[i] = cs.gamma2 * cs.beta[i] + (1.0 - cs.gamma2) * dev * dev;
  }
}

void dpsgd_step(ParamVector& params, const models::Model& model, const data::Dataset& ds,
                std::span<const std::size_t> batch, const ClipState& cs,
                privacy::PrivacyLedger* ledger, core::SeededRng& noise_rng, double lr) {
  const GradBatch grads = models::per_sample_grads(model, params, ds, batch);
  ParamVector sum(grads.dim, 0.0);
  for (std::size_t i = 0; i < grads.count; ++i) {
    const ParamVector clipped = clip_per_sample(grads.row(i), cs.clip_bound);
    for (std::size_t j = 0; j < grads.dim; ++j) sum[j] += clipped[j];
  }
  if (cs.noise_multiplier > 0.0) {
    const ParamVector noise =
        core::gaussian_vector(noise_rng, grads.dim, cs.noise_multiplier * cs.clip_bound);
    for (std::size_t j = 0; j < grads.dim; ++j) sum[j] += noise[j];
  }
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (std::size_t j = 0; j < grads.dim; ++j) {
    params[j] -= lr * (sum[j] * inv_b);
  }
  if (ledger != nullptr) ledger->tick();
}

void adadpigu_step(ParamVector& params, const models::Model& model,
                   const data::Dataset& ds, std::span<const std::size_t> batch,
                   const ImportanceState& importance, ClipState& cs,
                   const UnfreezeSchedule& schedule, privacy::PrivacyLedger* ledger,
                   core::SeededRng& noise_rng, double lr, long t,
                   const AdaDpiguOptions& options) {
  const std::size_t d = params.size();
  const double r_t = retention_at(schedule, t);

  // The aggregation mask. Heuristic per-sample pruning keeps noise on every
  // coordinate; the fixed importance mask confines it.
  BinaryMask mask;
  if (options.per_sample_topk || r_t >= 1.0) {
    mask = BinaryMask::all_ones(d);
  } else {
    mask = build_mask(importance, r_t);
  }

  GradBatch rows = models::per_sample_grads(model, params, ds, batch);
  const std::size_t k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(r_t * static_cast<double>(d))));
  for (std::size_t i = 0; i < rows.count; ++i) {
    auto row = rows.row(i);
    ParamVector g = options.per_sample_topk
                        ? ParamVector(row.begin(), row.end())
                        : core::masked_apply(mask, row);
    g = standardize(g, cs);
    if (options.per_sample_topk && k < d) {
      g = core::masked_apply(core::topk_mask(g, k), g);
    }
    g = clip_per_sample(g, cs.clip_bound);
    for (std::size_t j = 0; j < d; ++j) row[j] = g[j];
  }

  const ParamVector aggregated = noisy_aggregate(rows, mask, cs, noise_rng, batch.size());
  const ParamVector g_hat = restore(aggregated, cs);
  for (std::size_t j = 0; j < d; ++j) {
    params[j] -= lr * g_hat[j];
  }
  ema_update(cs, g_hat);
  if (ledger != nullptr) ledger->tick();
}

}  // namespace dpopt::optim
