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

#ifndef DPOPT_MODELS_BUILTIN_HPP_
#define DPOPT_MODELS_BUILTIN_HPP_

#include <memory>
#include <string>
#include <vector>

#include "dpopt/models/model.hpp"

namespace dpopt::models {

/// Softmax linear classifier: logits = W x + b.
/// Layout: W (classes x features, row-major), then b.
class LogisticRegression : public Model {
 public:
  LogisticRegression(std::size_t features, std::size_t classes);

  std::size_t param_count() const override { return classes_ * features_ + classes_; }
  std::size_t input_dim() const override { return features_; }
  std::size_t num_classes() const override { return classes_; }

  double loss(std::span<const double> params, std::span<const double> x,
              int label) const override;
  void loss_gradient(std::span<const double> params, std::span<const double> x, int label,
                     std::span<double> out) const override;
  int predict(std::span<const double> params, std::span<const double> x) const override;
  ParamVector init_params(core::SeededRng& rng) const override;

 private:
  void logits(std::span<const double> params, std::span<const double> x,
              std::span<double> out) const;
  std::size_t features_;
  std::size_t classes_;
};

/// One-hidden-layer ReLU network with a softmax head.
/// Layout: W1 (hidden x features), b1, W2 (classes x hidden), b2.
class Mlp : public Model {
 public:
  Mlp(std::size_t features, std::size_t hidden, std::size_t classes);

  std::size_t param_count() const override;
  std::size_t input_dim() const override { return features_; }
  std::size_t num_classes() const override { return classes_; }

  double loss(std::span<const double> params, std::span<const double> x,
              int label) const override;
  void loss_gradient(std::span<const double> params, std::span<const double> x, int label,
                     std::span<double> out) const override;
  int predict(std::span<const double> params, std::span<const double> x) const override;
  ParamVector init_params(core::SeededRng& rng) const override;

  std::size_t hidden_units() const { return hidden_; }

 private:
  void forward(std::span<const double> params, std::span<const double> x,
               std::vector<double>& pre_hidden, std::vector<double>& logits) const;
  std::size_t features_;
  std::size_t hidden_;
  std::size_t classes_;
};

/// Convolutional stack: [conv+relu+maxpool]* then dense+relu hidden layers
/// and a softmax head. Convolutions zero-pad; pooling has no padding and
/// routes gradients to the first maximum in scan order.
struct ConvLayer {
  std::size_t out_channels, kernel, stride, pad;
};
struct PoolLayer {
  std::size_t kernel, stride;
};

struct ConvNetConfig {
  std::size_t in_h = 28, in_w = 28, in_channels = 1;
  std::vector<ConvLayer> convs;
  std::vector<PoolLayer> pools;  // one per conv block
  std::vector<std::size_t> hidden_dense;
  std::size_t classes = 10;
};

/// 28x28x1 stack: conv 16@8x8 s2 p2, pool 2x2 s1, conv 32@4x4 s2 p2,
/// pool 2x2 s1, dense 32, softmax 10.
ConvNetConfig mnist_convnet_config();

/// 32x32x3 stack: three conv 3x3 s1 p1 blocks (16, 16, 32 filters) with
/// 2x2 s2 pooling, dense 128, softmax 10.
ConvNetConfig cifar_convnet_config();

class ConvNet : public Model {
 public:
  explicit ConvNet(ConvNetConfig config);

  std::size_t param_count() const override { return param_count_; }
  std::size_t input_dim() const override {
    return cfg_.in_h * cfg_.in_w * cfg_.in_channels;
  }
  std::size_t num_classes() const override { return cfg_.classes; }

  double loss(std::span<const double> params, std::span<const double> x,
              int label) const override;
  void loss_gradient(std::span<const double> params, std::span<const double> x, int label,
                     std::span<double> out) const override;
  int predict(std::span<const double> params, std::span<const double> x) const override;
  ParamVector init_params(core::SeededRng& rng) const override;

  const ConvNetConfig& config() const { return cfg_; }

 private:
  struct Workspace;
  void forward(std::span<const double> params, std::span<const double> x,
               Workspace& ws) const;

  ConvNetConfig cfg_;
  // Per-block geometry, resolved once at construction.
  std::vector<std::size_t> conv_out_h_, conv_out_w_, pool_out_h_, pool_out_w_;
  std::vector<std::size_t> block_in_channels_;
  std::vector<std::size_t> dense_in_;
  std::vector<std::size_t> param_offsets_;  // start of each layer's weights
  std::size_t param_count_ = 0;
  std::size_t flat_after_convs_ = 0;
};

/// Per-sample quadratic bowl: loss(theta; x) = ||theta - x||^2 / 2, so the
/// gradient is theta - x, G = 1 exactly, and the batch-average objective has
/// a closed-form minimum. Used by the convergence-bound harness and tests.
class Quadratic : public Model {
 public:
  explicit Quadratic(std::size_t dim) : dim_(dim) {}

  std::size_t param_count() const override { return dim_; }
  std::size_t input_dim() const override { return dim_; }
  std::size_t num_classes() const override { return 1; }

  double loss(std::span<const double> params, std::span<const double> x,
              int label) const override;
  void loss_gradient(std::span<const double> params, std::span<const double> x, int label,
                     std::span<double> out) const override;
  int predict(std::span<const double>, std::span<const double>) const override { return 0; }
  ParamVector init_params(core::SeededRng& rng) const override;

 private:
  std::size_t dim_;
};

/// Factory keyed by the harness config's model name.
std::unique_ptr<Model> make_model(const std::string& name, std::size_t features,
                                  std::size_t classes, std::size_t mlp_hidden);

}  // namespace dpopt::models

#endif  // DPOPT_MODELS_BUILTIN_HPP_
