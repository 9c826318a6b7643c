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

#include "dpopt/models/builtin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dpopt::models {

namespace {

// log(sum exp(z)) computed against the max for stability.
double log_sum_exp(std::span<const double> z) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : z) m = std::max(m, v);
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - m);
  return m + std::log(sum);
}

// Cross-entropy in log space: lse(logits) - logits[label].
double cross_entropy(std::span<const double> logits, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= logits.size()) {
    throw std::invalid_argument("cross_entropy: label out of range");
  }
  return log_sum_exp(logits) - logits[static_cast<std::size_t>(label)];
}

// d loss / d logits = softmax(logits) - onehot(label), written into delta.
void softmax_delta(std::span<const double> logits, int label, std::span<double> delta) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : logits) m = std::max(m, v);
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    delta[i] = std::exp(logits[i] - m);
    sum += delta[i];
  }
  for (std::size_t i = 0; i < logits.size(); ++i) delta[i] /= sum;
  delta[static_cast<std::size_t>(label)] -= 1.0;
}

int argmax(std::span<const double> z) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (z[i] > z[best]) best = i;
  }
  return static_cast<int>(best);
}

double uniform_init(core::SeededRng& rng, std::size_t fan_in) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  return bound * (2.0 * rng.next_double() - 1.0);
}

void check_sizes(const Model& m, std::span<const double> params, std::span<const double> x) {
  if (params.size() != m.param_count()) {
    throw std::invalid_argument("model: parameter length mismatch");
  }
  if (x.size() != m.input_dim()) {
    throw std::invalid_argument("model: input length mismatch");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// LogisticRegression

LogisticRegression::LogisticRegression(std::size_t features, std::size_t classes)
    : features_(features), classes_(classes) {
  if (features < 1 || classes < 2) {
    throw std::invalid_argument("LogisticRegression: need features >= 1, classes >= 2");
  }
}

void LogisticRegression::logits(std::span<const double> params, std::span<const double> x,
                                std::span<double> out) const {
  const double* w = params.data();
  const double* b = params.data() + classes_ * features_;
  for (std::size_t c = 0; c < classes_; ++c) {
    double acc = b[c];
    const double* row = w + c * features_;
    for (std::size_t f = 0; f < features_; ++f) acc += row[f] * x[f];
    out[c] = acc;
  }
}

double LogisticRegression::loss(std::span<const double> params, std::span<const double> x,
                                int label) const {
  check_sizes(*this, params, x);
  std::vector<double> z(classes_);
  logits(params, x, z);
  return cross_entropy(z, label);
}

void LogisticRegression::loss_gradient(std::span<const double> params,
                                       std::span<const double> x, int label,
                                       std::span<double> out) const {
  check_sizes(*this, params, x);
  std::vector<double> z(classes_);
  logits(params, x, z);
  std::vector<double> delta(classes_);
  softmax_delta(z, label, delta);
  double* gw = out.data();
  double* gb = out.data() + classes_ * features_;
  for (std::size_t c = 0; c < classes_; ++c) {
    for (std::size_t f = 0; f < features_; ++f) gw[c * features_ + f] = delta[c] * x[f];
    gb[c] = delta[c];
  }
}

int LogisticRegression::predict(std::span<const double> params,
                                std::span<const double> x) const {
  std::vector<double> z(classes_);
  logits(params, x, z);
  return argmax(z);
}

ParamVector LogisticRegression::init_params(core::SeededRng& rng) const {
  ParamVector p(param_count());
  for (auto& v : p) v = uniform_init(rng, features_);
  return p;
}

// ---------------------------------------------------------------------------
// Mlp

Mlp::Mlp(std::size_t features, std::size_t hidden, std::size_t classes)
    : features_(features), hidden_(hidden), classes_(classes) {
  if (features < 1 || hidden < 1 || classes < 2) {
    throw std::invalid_argument("Mlp: need features, hidden >= 1 and classes >= 2");
  }
}

std::size_t Mlp::param_count() const {
  return hidden_ * features_ + hidden_ + classes_ * hidden_ + classes_;
}

void Mlp::forward(std::span<const double> params, std::span<const double> x,
                  std::vector<double>& pre_hidden, std::vector<double>& logits) const {
  const double* w1 = params.data();
  const double* b1 = w1 + hidden_ * features_;
  const double* w2 = b1 + hidden_;
  const double* b2 = w2 + classes_ * hidden_;

  pre_hidden.assign(hidden_, 0.0);
  for (std::size_t h = 0; h < hidden_; ++h) {
    double acc = b1[h];
    const double* row = w1 + h * features_;
    for (std::size_t f = 0; f < features_; ++f) acc += row[f] * x[f];
    pre_hidden[h] = acc;
  }
  logits.assign(classes_, 0.0);
  for (std::size_t c = 0; c < classes_; ++c) {
    double acc = b2[c];
    const double* row = w2 + c * hidden_;
    for (std::size_t h = 0; h < hidden_; ++h) {
      acc += row[h] * std::max(0.0, pre_hidden[h]);
    }
    logits[c] = acc;
  }
}

double Mlp::loss(std::span<const double> params, std::span<const double> x,
                 int label) const {
  check_sizes(*this, params, x);
  std::vector<double> pre, z;
  forward(params, x, pre, z);
  return cross_entropy(z, label);
}

void Mlp::loss_gradient(std::span<const double> params, std::span<const double> x,
                        int label, std::span<double> out) const {
  check_sizes(*this, params, x);
  std::vector<double> pre, z;
  forward(params, x, pre, z);
  std::vector<double> delta(classes_);
  softmax_delta(z, label, delta);

  const double* w2 = params.data() + hidden_ * features_ + hidden_;
  double* gw1 = out.data();
  double* gb1 = gw1 + hidden_ * features_;
  double* gw2 = gb1 + hidden_;
  double* gb2 = gw2 + classes_ * hidden_;

  for (std::size_t c = 0; c < classes_; ++c) {
    for (std::size_t h = 0; h < hidden_; ++h) {
      gw2[c * hidden_ + h] = delta[c] * std::max(0.0, pre[h]);
    }
    gb2[c] = delta[c];
  }
  for (std::size_t h = 0; h < hidden_; ++h) {
    double dh = 0.0;
    if (pre[h] > 0.0) {
      for (std::size_t c = 0; c < classes_; ++c) dh += w2[c * hidden_ + h] * delta[c];
    }
    for (std::size_t f = 0; f < features_; ++f) gw1[h * features_ + f] = dh * x[f];
    gb1[h] = dh;
  }
}

int Mlp::predict(std::span<const double> params, std::span<const double> x) const {
  std::vector<double> pre, z;
  forward(params, x, pre, z);
  return argmax(z);
}

ParamVector Mlp::init_params(core::SeededRng& rng) const {
  ParamVector p(param_count());
  std::size_t at = 0;
  for (std::size_t i = 0; i < hidden_ * features_ + hidden_; ++i) {
    p[at++] = uniform_init(rng, features_);
  }
  for (std::size_t i = 0; i < classes_ * hidden_ + classes_; ++i) {
    p[at++] = uniform_init(rng, hidden_);
  }
  return p;
}

// ---------------------------------------------------------------------------
// ConvNet

ConvNetConfig mnist_convnet_config() {
  ConvNetConfig c;
  c.in_h = 28;
  c.in_w = 28;
  c.in_channels = 1;
  c.convs = {{16, 8, 2, 2}, {32, 4, 2, 2}};
  c.pools = {{2, 1}, {2, 1}};
  c.hidden_dense = {32};
  c.classes = 10;
  return c;
}

ConvNetConfig cifar_convnet_config() {
  ConvNetConfig c;
  c.in_h = 32;
  c.in_w = 32;
  c.in_channels = 3;
  c.convs = {{16, 3, 1, 1}, {16, 3, 1, 1}, {32, 3, 1, 1}};
  c.pools = {{2, 2}, {2, 2}, {2, 2}};
  c.hidden_dense = {128};
  c.classes = 10;
  return c;
}

struct ConvNet::Workspace {
  // Activations per block: input, conv output (pre-relu), pooled output.
  std::vector<std::vector<double>> conv_pre;
  std::vector<std::vector<double>> pooled;
  std::vector<std::vector<std::size_t>> pool_argmax;
  std::vector<std::vector<double>> dense_pre;  // pre-relu, last entry = logits
};

ConvNet::ConvNet(ConvNetConfig config) : cfg_(std::move(config)) {
  if (cfg_.convs.size() != cfg_.pools.size()) {
    throw std::invalid_argument("ConvNet: one pool spec per conv block required");
  }
  if (cfg_.classes < 2) throw std::invalid_argument("ConvNet: classes must be >= 2");

  std::size_t h = cfg_.in_h, w = cfg_.in_w, ch = cfg_.in_channels;
  for (std::size_t b = 0; b < cfg_.convs.size(); ++b) {
    const auto& cv = cfg_.convs[b];
    if (h + 2 * cv.pad < cv.kernel || w + 2 * cv.pad < cv.kernel) {
      throw std::invalid_argument("ConvNet: kernel larger than padded input");
    }
    block_in_channels_.push_back(ch);
    const std::size_t ch_out = cv.out_channels;
    const std::size_t hc = (h + 2 * cv.pad - cv.kernel) / cv.stride + 1;
    const std::size_t wc = (w + 2 * cv.pad - cv.kernel) / cv.stride + 1;
    conv_out_h_.push_back(hc);
    conv_out_w_.push_back(wc);
    const auto& pl = cfg_.pools[b];
    if (hc < pl.kernel || wc < pl.kernel) {
      throw std::invalid_argument("ConvNet: pool window larger than conv output");
    }
    const std::size_t hp = (hc - pl.kernel) / pl.stride + 1;
    const std::size_t wp = (wc - pl.kernel) / pl.stride + 1;
    pool_out_h_.push_back(hp);
    pool_out_w_.push_back(wp);

    param_offsets_.push_back(param_count_);
    param_count_ += ch_out * ch * cv.kernel * cv.kernel + ch_out;
    h = hp;
    w = wp;
    ch = ch_out;
  }
  flat_after_convs_ = h * w * ch;

  std::size_t in = flat_after_convs_;
  for (std::size_t units : cfg_.hidden_dense) {
    dense_in_.push_back(in);
    param_offsets_.push_back(param_count_);
    param_count_ += units * in + units;
    in = units;
  }
  dense_in_.push_back(in);
  param_offsets_.push_back(param_count_);
  param_count_ += cfg_.classes * in + cfg_.classes;
}

void ConvNet::forward(std::span<const double> params, std::span<const double> x,
                      Workspace& ws) const {
  const std::size_t n_blocks = cfg_.convs.size();
  ws.conv_pre.assign(n_blocks, {});
  ws.pooled.assign(n_blocks, {});
  ws.pool_argmax.assign(n_blocks, {});
  ws.dense_pre.assign(cfg_.hidden_dense.size() + 1, {});

  std::vector<double> cur(x.begin(), x.end());
  std::size_t h = cfg_.in_h, w = cfg_.in_w;

  for (std::size_t b = 0; b < n_blocks; ++b) {
    const auto& cv = cfg_.convs[b];
    const std::size_t ch_in = block_in_channels_[b];
    const std::size_t hc = conv_out_h_[b], wc = conv_out_w_[b];
    const double* wts = params.data() + param_offsets_[b];
    const double* bias = wts + cv.out_channels * ch_in * cv.kernel * cv.kernel;

    auto& pre = ws.conv_pre[b];
    pre.assign(cv.out_channels * hc * wc, 0.0);
    for (std::size_t oc = 0; oc < cv.out_channels; ++oc) {
      for (std::size_t oy = 0; oy < hc; ++oy) {
        for (std::size_t ox = 0; ox < wc; ++ox) {
          double acc = bias[oc];
          for (std::size_t ic = 0; ic < ch_in; ++ic) {
            const double* kern =
                wts + ((oc * ch_in + ic) * cv.kernel) * cv.kernel;
            for (std::size_t ky = 0; ky < cv.kernel; ++ky) {
              const std::ptrdiff_t iy =
                  static_cast<std::ptrdiff_t>(oy * cv.stride + ky) -
                  static_cast<std::ptrdiff_t>(cv.pad);
              if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
              for (std::size_t kx = 0; kx < cv.kernel; ++kx) {
                const std::ptrdiff_t ix =
                    static_cast<std::ptrdiff_t>(ox * cv.stride + kx) -
                    static_cast<std::ptrdiff_t>(cv.pad);
                if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
                acc += kern[ky * cv.kernel + kx] *
                       cur[(ic * h + static_cast<std::size_t>(iy)) * w +
                           static_cast<std::size_t>(ix)];
              }
            }
          }
          pre[(oc * hc + oy) * wc + ox] = acc;
        }
      }
    }

    // ReLU then max pool; remember where each max came from.
    const auto& pl = cfg_.pools[b];
    const std::size_t hp = pool_out_h_[b], wp = pool_out_w_[b];
    auto& pooled = ws.pooled[b];
    auto& amax = ws.pool_argmax[b];
    pooled.assign(cv.out_channels * hp * wp, 0.0);
    amax.assign(cv.out_channels * hp * wp, 0);
    for (std::size_t c = 0; c < cv.out_channels; ++c) {
      for (std::size_t py = 0; py < hp; ++py) {
        for (std::size_t px = 0; px < wp; ++px) {
          double best = -std::numeric_limits<double>::infinity();
          std::size_t best_idx = 0;
          for (std::size_t ky = 0; ky < pl.kernel; ++ky) {
            for (std::size_t kx = 0; kx < pl.kernel; ++kx) {
              const std::size_t iy = py * pl.stride + ky;
              const std::size_t ix = px * pl.stride + kx;
              const std::size_t idx = (c * hc + iy) * wc + ix;
              const double v = std::max(0.0, pre[idx]);
              if (v > best) {
                best = v;
                best_idx = idx;
              }
            }
          }
          pooled[(c * hp + py) * wp + px] = best;
          amax[(c * hp + py) * wp + px] = best_idx;
        }
      }
    }
    cur = pooled;
    h = hp;
    w = wp;
  }

  // Dense stack. Hidden layers get ReLU; the last layer emits logits.
  std::size_t dense_param = n_blocks;
  std::vector<double> in = std::move(cur);
  for (std::size_t l = 0; l <= cfg_.hidden_dense.size(); ++l) {
    const bool is_head = l == cfg_.hidden_dense.size();
    const std::size_t units = is_head ? cfg_.classes : cfg_.hidden_dense[l];
    const std::size_t fan_in = dense_in_[l];
    const double* wts = params.data() + param_offsets_[dense_param + l];
    const double* bias = wts + units * fan_in;
    auto& pre = ws.dense_pre[l];
    pre.assign(units, 0.0);
    for (std::size_t u = 0; u < units; ++u) {
      double acc = bias[u];
      const double* row = wts + u * fan_in;
      for (std::size_t f = 0; f < fan_in; ++f) acc += row[f] * in[f];
      pre[u] = acc;
    }
    if (!is_head) {
      in.assign(units, 0.0);
      for (std::size_t u = 0; u < units; ++u) in[u] = std::max(0.0, pre[u]);
    }
  }
}

double ConvNet::loss(std::span<const double> params, std::span<const double> x,
                     int label) const {
  check_sizes(*this, params, x);
  Workspace ws;
  forward(params, x, ws);
  return cross_entropy(ws.dense_pre.back(), label);
}

int ConvNet::predict(std::span<const double> params, std::span<const double> x) const {
  Workspace ws;
  forward(params, x, ws);
  return argmax(ws.dense_pre.back());
}

void ConvNet::loss_gradient(std::span<const double> params, std::span<const double> x,
                            int label, std::span<double> out) const {
  check_sizes(*this, params, x);
  Workspace ws;
  forward(params, x, ws);
  std::fill(out.begin(), out.end(), 0.0);

  const std::size_t n_blocks = cfg_.convs.size();
  const std::size_t n_dense = cfg_.hidden_dense.size() + 1;

  // Head delta.
  std::vector<double> delta(cfg_.classes);
  softmax_delta(ws.dense_pre.back(), label, delta);

  // Dense layers, back to front.
  for (std::size_t l = n_dense; l-- > 0;) {
    const bool is_head = l == n_dense - 1;
    const std::size_t units = is_head ? cfg_.classes : cfg_.hidden_dense[l];
    const std::size_t fan_in = dense_in_[l];
    const double* wts = params.data() + param_offsets_[n_blocks + l];
    double* gw = out.data() + param_offsets_[n_blocks + l];
    double* gb = gw + units * fan_in;

    // Input to this layer: pooled conv output for l == 0, previous hidden
    // activation otherwise.
    std::vector<double> layer_in;
    if (l == 0) {
      layer_in = n_blocks > 0 ? ws.pooled.back()
                              : std::vector<double>(x.begin(), x.end());
    } else {
      const auto& pre_prev = ws.dense_pre[l - 1];
      layer_in.assign(pre_prev.size(), 0.0);
      for (std::size_t i = 0; i < pre_prev.size(); ++i) {
        layer_in[i] = std::max(0.0, pre_prev[i]);
      }
    }

    std::vector<double> din(fan_in, 0.0);
    for (std::size_t u = 0; u < units; ++u) {
      const double du = delta[u];
      const double* row = wts + u * fan_in;
      for (std::size_t f = 0; f < fan_in; ++f) {
        gw[u * fan_in + f] = du * layer_in[f];
        din[f] += row[f] * du;
      }
      gb[u] = du;
    }
    if (l > 0) {
      const auto& pre_prev = ws.dense_pre[l - 1];
      delta.assign(fan_in, 0.0);
      for (std::size_t f = 0; f < fan_in; ++f) {
        delta[f] = pre_prev[f] > 0.0 ? din[f] : 0.0;
      }
    } else {
      delta = std::move(din);  // gradient w.r.t. the flattened conv output
    }
  }

  if (n_blocks == 0) return;

  // Conv blocks, back to front. `delta` currently holds d loss / d pooled.
  for (std::size_t b = n_blocks; b-- > 0;) {
    const auto& cv = cfg_.convs[b];
    const std::size_t ch_in = block_in_channels_[b];
    const std::size_t hc = conv_out_h_[b], wc = conv_out_w_[b];
    const std::size_t in_h = b == 0 ? cfg_.in_h : pool_out_h_[b - 1];
    const std::size_t in_w = b == 0 ? cfg_.in_w : pool_out_w_[b - 1];
    const std::span<const double> block_in =
        b == 0 ? x : std::span<const double>(ws.pooled[b - 1]);
    const auto& pre = ws.conv_pre[b];
    const auto& amax = ws.pool_argmax[b];

    // Un-pool: route each pooled delta to its argmax, then gate by ReLU.
    std::vector<double> dpre(pre.size(), 0.0);
    for (std::size_t i = 0; i < amax.size(); ++i) {
      dpre[amax[i]] += delta[i];
    }
    for (std::size_t i = 0; i < dpre.size(); ++i) {
      if (pre[i] <= 0.0) dpre[i] = 0.0;
    }

    const double* wts = params.data() + param_offsets_[b];
    double* gw = out.data() + param_offsets_[b];
    double* gb = gw + cv.out_channels * ch_in * cv.kernel * cv.kernel;
    std::vector<double> din(ch_in * in_h * in_w, 0.0);

    for (std::size_t oc = 0; oc < cv.out_channels; ++oc) {
      for (std::size_t oy = 0; oy < hc; ++oy) {
        for (std::size_t ox = 0; ox < wc; ++ox) {
          const double d = dpre[(oc * hc + oy) * wc + ox];
          if (d == 0.0) continue;
          gb[oc] += d;
          for (std::size_t ic = 0; ic < ch_in; ++ic) {
            const std::size_t base = ((oc * ch_in + ic) * cv.kernel) * cv.kernel;
            for (std::size_t ky = 0; ky < cv.kernel; ++ky) {
              const std::ptrdiff_t iy =
                  static_cast<std::ptrdiff_t>(oy * cv.stride + ky) -
                  static_cast<std::ptrdiff_t>(cv.pad);
              if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(in_h)) continue;
              for (std::size_t kx = 0; kx < cv.kernel; ++kx) {
                const std::ptrdiff_t ix =
                    static_cast<std::ptrdiff_t>(ox * cv.stride + kx) -
                    static_cast<std::ptrdiff_t>(cv.pad);
                if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(in_w)) continue;
                const std::size_t in_idx =
                    (ic * in_h + static_cast<std::size_t>(iy)) * in_w +
                    static_cast<std::size_t>(ix);
                gw[base + ky * cv.kernel + kx] += d * block_in[in_idx];
                din[in_idx] += d * wts[base + ky * cv.kernel + kx];
              }
            }
          }
        }
      }
    }
    delta = std::move(din);
  }
}

ParamVector ConvNet::init_params(core::SeededRng& rng) const {
  ParamVector p(param_count_);
  std::size_t at = 0;
  for (std::size_t b = 0; b < cfg_.convs.size(); ++b) {
    const auto& cv = cfg_.convs[b];
    const std::size_t fan_in = block_in_channels_[b] * cv.kernel * cv.kernel;
    const std::size_t n = cv.out_channels * fan_in + cv.out_channels;
    for (std::size_t i = 0; i < n; ++i) p[at++] = uniform_init(rng, fan_in);
  }
  for (std::size_t l = 0; l < cfg_.hidden_dense.size() + 1; ++l) {
    const bool is_head = l == cfg_.hidden_dense.size();
    const std::size_t units = is_head ? cfg_.classes : cfg_.hidden_dense[l];
    const std::size_t fan_in = dense_in_[l];
    const std::size_t n = units * fan_in + units;
    for (std::size_t i = 0; i < n; ++i) p[at++] = uniform_init(rng, fan_in);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Quadratic

double Quadratic::loss(std::span<const double> params, std::span<const double> x,
                       int) const {
  check_sizes(*this, params, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double diff = params[i] - x[i];
    acc += diff * diff;
  }
  return 0.5 * acc;
}

void Quadratic::loss_gradient(std::span<const double> params, std::span<const double> x,
                              int, std::span<double> out) const {
  check_sizes(*this, params, x);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = params[i] - x[i];
}

ParamVector Quadratic::init_params(core::SeededRng& rng) const {
  ParamVector p(dim_);
  for (auto& v : p) v = 2.0 * rng.next_double() - 1.0;
  return p;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Model> make_model(const std::string& name, std::size_t features,
                                  std::size_t classes, std::size_t mlp_hidden) {
  if (name == "logreg") {
    return std::make_unique<LogisticRegression>(features, classes);
  }
  if (name == "mlp") {
    return std::make_unique<Mlp>(features, mlp_hidden, classes);
  }
  if (name == "cnn") {
    if (features == 28 * 28) {
      auto cfg = mnist_convnet_config();
      cfg.classes = classes;
      return std::make_unique<ConvNet>(cfg);
    }
    if (features == 32 * 32 * 3) {
      auto cfg = cifar_convnet_config();
      cfg.classes = classes;
      return std::make_unique<ConvNet>(cfg);
    }
    throw std::invalid_argument(
        "make_model: cnn expects 28x28x1 or 32x32x3 inputs, got feature dim " +
        std::to_string(features));
  }
  throw std::invalid_argument("make_model: unknown model '" + name + "'");
}

}  // namespace dpopt::models
