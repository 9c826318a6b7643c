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

#include "dpopt/models/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpopt::models {

double per_sample_loss(const Model& model, std::span<const double> params,
                       std::span<const double> x, int label) {
  if (params.size() != model.param_count()) {
    throw std::invalid_argument("per_sample_loss: expected " +
                                std::to_string(model.param_count()) + " parameters, got " +
                                std::to_string(params.size()));
  }
  if (x.size() != model.input_dim()) {
    throw std::invalid_argument("per_sample_loss: expected input dim " +
                                std::to_string(model.input_dim()) + ", got " +
                                std::to_string(x.size()));
  }
  return model.loss(params, x, label);
}

GradBatch per_sample_grads(const Model& model, std::span<const double> params,
                           const data::Dataset& ds, std::span<const std::size_t> indices) {
  if (indices.empty()) {
    throw std::invalid_argument("per_sample_grads: batch must have at least one sample");
  }
  if (params.size() != model.param_count()) {
    throw std::invalid_argument("per_sample_grads: parameter length mismatch");
  }
  GradBatch batch(indices.size(), model.param_count());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const std::size_t idx = indices[i];
    model.loss_gradient(params, ds.row(idx), ds.labels[idx], batch.row(i));
    for (double g : batch.row(i)) {
      if (!std::isfinite(g)) {
        throw std::domain_error("per_sample_grads: non-finite gradient for sample " +
                                std::to_string(idx));
      }
    }
  }
  return batch;
}

ParamVector finite_diff_grad(const Model& model, std::span<const double> params,
                             std::span<const double> x, int label, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad: h must be positive");
  ParamVector probe(params.begin(), params.end());
  ParamVector grad(params.size(), 0.0);
  for (std::size_t j = 0; j < probe.size(); ++j) {
    const double saved = probe[j];
    probe[j] = saved + h;
    const double up = model.loss(probe, x, label);
    probe[j] = saved - h;
    const double down = model.loss(probe, x, label);
    probe[j] = saved;
    grad[j] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace dpopt::models
