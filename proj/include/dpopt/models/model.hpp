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

#ifndef DPOPT_MODELS_MODEL_HPP_
#define DPOPT_MODELS_MODEL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "dpopt/core/rng.hpp"
#include "dpopt/core/vec.hpp"
#include "dpopt/data/dataset.hpp"

namespace dpopt::models {

using core::ParamVector;

/// B per-sample gradient rows, each of length dim, in sample order.
struct GradBatch {
  std::size_t dim = 0;
  std::size_t count = 0;
  std::vector<double> data;  // count * dim, row-major

  GradBatch() = default;
  GradBatch(std::size_t rows, std::size_t d) : dim(d), count(rows), data(rows * d, 0.0) {}

  std::span<double> row(std::size_t i) { return {data.data() + i * dim, dim}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * dim, dim}; }
};

/// A differentiable per-sample objective over a flat parameter vector.
///
/// Parameters flatten layer by layer in declaration order, weights before
/// biases, row-major within each matrix, so coordinate masks stay meaningful
/// across runs.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::size_t param_count() const = 0;
  virtual std::size_t input_dim() const = 0;
  virtual std::size_t num_classes() const = 0;

  virtual double loss(std::span<const double> params, std::span<const double> x,
                      int label) const = 0;
  virtual void loss_gradient(std::span<const double> params, std::span<const double> x,
                             int label, std::span<double> out) const = 0;

  /// argmax class under the current parameters.
  virtual int predict(std::span<const double> params, std::span<const double> x) const = 0;

  /// Uniform [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer, drawn in
  /// flattening order.
  virtual ParamVector init_params(core::SeededRng& rng) const = 0;
};

/// Cross-entropy loss of one sample; checks dimensions before dispatching.
double per_sample_loss(const Model& model, std::span<const double> params,
                       std::span<const double> x, int label);

/// Exact per-sample gradients for a batch of dataset rows. Rows keep sample
/// order; a non-finite gradient entry reports the offending sample index.
GradBatch per_sample_grads(const Model& model, std::span<const double> params,
                           const data::Dataset& ds, std::span<const std::size_t> indices);

/// Central-difference gradient oracle: (L(p + h e_j) - L(p - h e_j)) / 2h.
ParamVector finite_diff_grad(const Model& model, std::span<const double> params,
                             std::span<const double> x, int label, double h);

}  // namespace dpopt::models

#endif  // DPOPT_MODELS_MODEL_HPP_
