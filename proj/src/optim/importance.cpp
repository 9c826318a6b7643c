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

#include "dpopt/optim/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dpopt::optim {

void importance_accumulate(ImportanceState& state, std::span<const double> g) {
  if (g.size() != state.dim()) {
    throw std::invalid_argument("importance_accumulate: dimension mismatch");
  }
  if (state.finalized) {
    throw std::logic_error("importance_accumulate: scores already finalized");
  }
  core::require_finite(g, "importance_accumulate");
  for (std::size_t j = 0; j < g.size(); ++j) state.scores[j] += std::abs(g[j]);
  ++state.steps_accumulated;
}

void finalize_scores(ImportanceState& state) {
  if (state.steps_accumulated < 1) {
    throw std::logic_error("finalize_scores: no accumulated steps");
  }
  if (state.finalized) throw std::logic_error("finalize_scores: already finalized");
  const double inv = 1.0 / static_cast<double>(state.steps_accumulated);
  for (auto& s : state.scores) s *= inv;
  state.sorted_order.resize(state.dim());
  std::iota(state.sorted_order.begin(), state.sorted_order.end(), std::size_t{0});
  std::stable_sort(state.sorted_order.begin(), state.sorted_order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return state.scores[a] > state.scores[b];
                   });
  state.finalized = true;
}

BinaryMask build_mask(const ImportanceState& state, double r) {
  if (!state.finalized) throw std::logic_error("build_mask: scores not finalized");
  if (!(r > 0.0) || r > 1.0) {
    throw std::invalid_argument("build_mask: retention must lie in (0, 1]");
  }
  const std::size_t d = state.dim();
  // floor(r*d), floored at one: an all-zero mask would freeze the whole model.
  const std::size_t k =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(r * static_cast<double>(d))));
  BinaryMask m;
  m.bits.assign(d, 0);
  for (std::size_t i = 0; i < k; ++i) m.bits[state.sorted_order[i]] = 1;
  m.ones_count = k;
  return m;
}

double retention_at(const UnfreezeSchedule& schedule, long t) {
  if (t < 0 || t > schedule.total_steps) {
    throw std::invalid_argument("retention_at: step " + std::to_string(t) +
                                " outside [0, " + std::to_string(schedule.total_steps) + "]");
  }
  if (schedule.mode == ScheduleMode::kFixed) return schedule.r0;
  if (schedule.total_steps == 0) return 1.0;
  const double frac = static_cast<double>(t) / static_cast<double>(schedule.total_steps);
  return schedule.r0 + (1.0 - schedule.r0) * frac;
}

}  // namespace dpopt::optim
