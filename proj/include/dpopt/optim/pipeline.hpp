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

#ifndef DPOPT_OPTIM_PIPELINE_HPP_
#define DPOPT_OPTIM_PIPELINE_HPP_

#include <cstddef>
#include <span>

#include "dpopt/core/rng.hpp"
#include "dpopt/core/vec.hpp"
#include "dpopt/data/dataset.hpp"
#include "dpopt/models/model.hpp"
#include "dpopt/optim/importance.hpp"
#include "dpopt/privacy/accountant.hpp"

namespace dpopt::optim {

using models::GradBatch;

/// Coordinate-wise standardization statistics and the privacy knobs of one
/// training run. alpha/beta are exponential moving estimates of the restored
/// gradient's mean and variance; mu guards the division.
struct ClipState {
  ParamVector alpha;  // EMA mean
  ParamVector beta;   // EMA variance, >= 0 coordinate-wise
  double mu = 1e-6;
  double gamma1 = 0.9;
  double gamma2 = 0.999;
  double clip_bound = 1.0;
  double noise_multiplier = 0.0;

  ClipState(std::size_t d, double clip, double sigma, double mu_in = 1e-6,
            double g1 = 0.9, double g2 = 0.999, double alpha0 = 0.0, double beta0 = 1.0);

  std::size_t dim() const { return alpha.size(); }
};

/// (g - alpha) / (sqrt(beta) + mu), coordinate-wise.
ParamVector standardize(std::span<const double> g, const ClipState& cs);

/// Exact algebraic inverse of standardize: g_std * (sqrt(beta) + mu) + alpha.
ParamVector restore(std::span<const double> g_std, const ClipState& cs);

/// g / max(1, ||g|| / c): output norm <= c, direction preserved, vectors
/// already inside the ball pass through unchanged.
ParamVector clip_per_sample(std::span<const double> g, double c);

/// (1/B) (sum of rows + mask (.) N(0, sigma^2 C^2 I)).
/// Every row must already be clipped to the bound and supported on the mask;
/// a violation reports the contract breach. Off-mask output coordinates are
/// exactly zero. Draws d gaussians (then masks) when sigma > 0.
ParamVector noisy_aggregate(const GradBatch& rows, const BinaryMask& mask,
                            const ClipState& cs, core::SeededRng& rng,
                            std::size_t batch_size);

/// alpha' = g1 alpha + (1-g1) g_hat;  beta' = g2 beta + (1-g2) (g_hat - alpha)^2,
/// the variance update using the pre-update alpha, in that order.
void ema_update(ClipState& cs, std::span<const double> g_hat);

/// One DPSGD step: clip each per-sample gradient to C, aggregate with
/// isotropic noise, update params. Ticks the ledger once when given.
void dpsgd_step(ParamVector& params, const models::Model& model, const data::Dataset& ds,
                std::span<const std::size_t> batch, const ClipState& cs,
                privacy::PrivacyLedger* ledger, core::SeededRng& noise_rng, double lr);

struct AdaDpiguOptions {
  /// Heuristic per-sample top-k pruning on standardized magnitudes instead of
  /// the fixed pretraining mask. Data-dependent, so it voids the fixed-mask
  /// privacy argument; off by default.
  bool per_sample_topk = false;
};

/// One importance-masked adaptive step, in pipeline order: refresh the mask
/// from the schedule, per-sample gradients, mask, standardize, clip, noisy
/// aggregate, restore, parameter update, EMA update. Consumes exactly one
/// ledger step. Off-mask parameter coordinates are left untouched.
void adadpigu_step(ParamVector& params, const models::Model& model,
                   const data::Dataset& ds, std::span<const std::size_t> batch,
                   const ImportanceState& importance, ClipState& cs,
                   const UnfreezeSchedule& schedule, privacy::PrivacyLedger* ledger,
                   core::SeededRng& noise_rng, double lr, long t,
                   const AdaDpiguOptions& options = {});

}  // namespace dpopt::optim

#endif  // DPOPT_OPTIM_PIPELINE_HPP_
