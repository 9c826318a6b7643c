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

#ifndef DPOPT_HARNESS_CONFIG_HPP_
#define DPOPT_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpopt::harness {

/// Everything one training run needs. Parsed from a flat `key = value` file
/// (# comments), with command-line overrides applied on top; every resolved
/// value is echoed into the metrics header so runs are self-describing.
struct RunConfig {
  // dataset
  std::string dataset = "synth";  // synth | idx
  std::string idx_images, idx_labels;
  std::string idx_test_images, idx_test_labels;
  std::size_t subset_n = 0;  // 0 = use everything
  std::size_t synth_n = 4000;
  std::size_t synth_features = 20;
  std::size_t synth_classes = 4;
  double synth_margin = 8.0;
  double test_fraction = 0.25;  // synth holdout, generated separately

  // model
  std::string model = "logreg";  // logreg | mlp | cnn
  std::size_t mlp_hidden = 64;

  // optimizer
  std::string optimizer = "sgd";  // sgd | dpsgd | adadpigu
  std::size_t batch_size = 100;
  double lr = 0.1;
  std::size_t epochs = 5;
  std::size_t pretrain_steps = 0;  // importance-scoring DPSGD steps
  double retention = 0.6;
  std::string schedule = "fixed";  // fixed | linear
  bool per_sample_topk = false;    // heuristic mode, voids the fixed-mask guarantee

  // privacy (exactly one of sigma / epsilon for private optimizers)
  double clip_bound = 1.0;
  double sigma = -1.0;    // < 0 = unset
  double epsilon = -1.0;  // < 0 = unset
  double delta = 1e-5;
  std::string sigma_mode = "accountant";  // accountant | table4
  std::string table4_dataset = "mnist";   // mnist | cifar10

  // standardization
  double mu = 1e-6;
  double gamma1 = 0.9;
  double gamma2 = 0.999;
  double alpha0 = 0.0;
  double beta0 = 1.0;

  // run
  std::uint64_t seed = 1;
  std::string output = "metrics.txt";
  bool timing = false;  // off keeps metrics files byte-reproducible
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::vector<std::string>& problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

RunConfig parse_config_file(const std::string& path);

/// Applies a single `key=value` override; unknown keys throw.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

/// Collects every invalid field; empty means the config is usable.
std::vector<std::string> validate(const RunConfig& config);

/// Throws ConfigError listing all problems if validation fails.
void require_valid(const RunConfig& config);

/// Echo all fields as `# key = value` lines.
void write_config_header(std::ostream& os, const RunConfig& config);

/// Table of noise presets keyed by (dataset, eps); throws if missing.
double table4_sigma(const std::string& dataset, double eps);

}  // namespace dpopt::harness

#endif  // DPOPT_HARNESS_CONFIG_HPP_
