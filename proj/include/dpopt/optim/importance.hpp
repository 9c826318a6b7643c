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

#ifndef DPOPT_OPTIM_IMPORTANCE_HPP_
#define DPOPT_OPTIM_IMPORTANCE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "dpopt/core/vec.hpp"

namespace dpopt::optim {

using core::BinaryMask;
using core::ParamVector;

/// Per-coordinate importance: mean absolute (privatized) gradient over the
/// pretraining phase, plus the descending rank order derived from it.
/// Ties rank by ascending coordinate index.
struct ImportanceState {
  ParamVector scores;  // running sums until finalized, then means
  long steps_accumulated = 0;
  bool finalized = false;
  std::vector<std::size_t> sorted_order;

  explicit ImportanceState(std::size_t d) : scores(d, 0.0) {}
  std::size_t dim() const { return scores.size(); }
};

/// scores_j += |g_j|; one accumulation per pretraining step.
void importance_accumulate(ImportanceState& state, std::span<const double> g);

/// Divide by the number of accumulated steps and compute the rank order.
void finalize_scores(ImportanceState& state);

/// Mask of the top floor(r*d) coordinates by score (at least one).
/// Requires finalized scores and r in (0, 1].
BinaryMask build_mask(const ImportanceState& state, double r);

enum class ScheduleMode { kFixed, kLinear };

/// Retention schedule r_t: fixed at r0, or ramping linearly from r0 at t=0
/// to 1 at t=T.
struct UnfreezeSchedule {
  ScheduleMode mode = ScheduleMode::kFixed;
  double r0 = 0.6;
  long total_steps = 0;
};

double retention_at(const UnfreezeSchedule& schedule, long t);

}  // namespace dpopt::optim

#endif  // DPOPT_OPTIM_IMPORTANCE_HPP_
