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

#include "dpopt/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dpopt::harness {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + " expects a number, got '" + value + "'");
  }
  if (pos != value.size()) {
    throw std::invalid_argument("config: " + key + " expects a number, got '" + value + "'");
  }
  return out;
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  const double d = parse_double(key, value);
  if (d < 0 || d != std::floor(d)) {
    throw std::invalid_argument("config: " + key + " expects a non-negative integer");
  }
  return static_cast<std::size_t>(d);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::invalid_argument("config: " + key + " expects true/false");
}

std::string join(const std::vector<std::string>& parts) {
  std::string out = "invalid config:";
  for (const auto& p : parts) out += "\n  - " + p;
  return out;
}

}  // namespace

ConfigError::ConfigError(const std::vector<std::string>& problems)
    : std::runtime_error(join(problems)), problems_(problems) {}

void apply_override(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "dataset") c.dataset = value;
  else if (key == "idx_images") c.idx_images = value;
  else if (key == "idx_labels") c.idx_labels = value;
  else if (key == "idx_test_images") c.idx_test_images = value;
  else if (key == "idx_test_labels") c.idx_test_labels = value;
  else if (key == "subset_n") c.subset_n = parse_size(key, value);
  else if (key == "synth_n") c.synth_n = parse_size(key, value);
  else if (key == "synth_features") c.synth_features = parse_size(key, value);
  else if (key == "synth_classes") c.synth_classes = parse_size(key, value);
  else if (key == "synth_margin") c.synth_margin = parse_double(key, value);
  else if (key == "test_fraction") c.test_fraction = parse_double(key, value);
  else if (key == "model") c.model = value;
  else if (key == "mlp_hidden") c.mlp_hidden = parse_size(key, value);
  else if (key == "optimizer") c.optimizer = value;
  else if (key == "batch_size") c.batch_size = parse_size(key, value);
  else if (key == "lr") c.lr = parse_double(key, value);
  else if (key == "epochs") c.epochs = parse_size(key, value);
  else if (key == "pretrain_steps") c.pretrain_steps = parse_size(key, value);
  else if (key == "retention") c.retention = parse_double(key, value);
  else if (key == "schedule") c.schedule = value;
  else if (key == "per_sample_topk") c.per_sample_topk = parse_bool(key, value);
  else if (key == "clip_bound") c.clip_bound = parse_double(key, value);
  else if (key == "sigma") c.sigma = parse_double(key, value);
  else if (key == "epsilon") c.epsilon = parse_double(key, value);
  else if (key == "delta") c.delta = parse_double(key, value);
  else if (key == "sigma_mode") c.sigma_mode = value;
  else if (key == "table4_dataset") c.table4_dataset = value;
  else if (key == "mu") c.mu = parse_double(key, value);
  else if (key == "gamma1") c.gamma1 = parse_double(key, value);
  else if (key == "gamma2") c.gamma2 = parse_double(key, value);
  else if (key == "alpha0") c.alpha0 = parse_double(key, value);
  else if (key == "beta0") c.beta0 = parse_double(key, value);
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_size(key, value));
  else if (key == "output") c.output = value;
  else if (key == "timing") c.timing = parse_bool(key, value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file: " + path});
  RunConfig config;
  std::string line;
  std::vector<std::string> problems;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    try {
      apply_override(config, key, value);
    } catch (const std::exception& e) {
      problems.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!problems.empty()) throw ConfigError(problems);
  return config;
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> bad;
  auto complain = [&](const std::string& msg) { bad.push_back(msg); };

  if (c.dataset != "synth" && c.dataset != "idx") {
    complain("dataset: must be 'synth' or 'idx', got '" + c.dataset + "'");
  }
  if (c.dataset == "idx" && (c.idx_images.empty() || c.idx_labels.empty())) {
    complain("idx_images/idx_labels: required when dataset = idx");
  }
  if (c.dataset == "synth") {
    if (c.synth_n < 2) complain("synth_n: must be >= 2");
    if (c.synth_features < 1) complain("synth_features: must be >= 1");
    if (c.synth_classes < 2) complain("synth_classes: must be >= 2");
    if (!(c.test_fraction > 0.0) || c.test_fraction >= 1.0) {
      complain("test_fraction: must lie in (0, 1)");
    }
  }
  if (c.model != "logreg" && c.model != "mlp" && c.model != "cnn") {
    complain("model: must be logreg | mlp | cnn, got '" + c.model + "'");
  }
  if (c.model == "mlp" && c.mlp_hidden < 1) complain("mlp_hidden: must be >= 1");
  const bool private_run = c.optimizer == "dpsgd" || c.optimizer == "adadpigu";
  if (c.optimizer != "sgd" && !private_run) {
    complain("optimizer: must be sgd | dpsgd | adadpigu, got '" + c.optimizer + "'");
  }
  if (c.batch_size < 1) complain("batch_size: must be >= 1");
  if (!(c.lr > 0.0)) complain("lr: must be positive");
  if (c.epochs < 1) complain("epochs: must be >= 1");
  if (!(c.retention > 0.0) || c.retention > 1.0) complain("retention: must lie in (0, 1]");
  if (c.schedule != "fixed" && c.schedule != "linear") {
    complain("schedule: must be fixed | linear");
  }
  if (private_run) {
    const bool has_sigma = c.sigma >= 0.0;
    const bool has_eps = c.epsilon > 0.0;
    if (c.sigma_mode == "accountant") {
      if (has_sigma == has_eps) {
        complain("sigma/epsilon: exactly one must be given for " + c.optimizer);
      }
    } else if (c.sigma_mode == "table4") {
      if (!has_eps || has_sigma) {
        complain("sigma_mode=table4: give epsilon only; sigma comes from the preset");
      }
      if (c.table4_dataset != "mnist" && c.table4_dataset != "cifar10") {
        complain("table4_dataset: must be mnist | cifar10");
      }
    } else {
      complain("sigma_mode: must be accountant | table4");
    }
    if (!(c.delta > 0.0) || c.delta >= 1.0) complain("delta: must lie in (0, 1)");
    if (!(c.clip_bound > 0.0)) complain("clip_bound: must be positive");
  }
  if (c.optimizer == "adadpigu") {
    if (c.retention < 1.0 && !c.per_sample_topk && c.pretrain_steps < 1) {
      complain("pretrain_steps: importance mask with retention < 1 needs >= 1 step");
    }
    if (!(c.mu > 0.0)) complain("mu: must be positive");
    if (c.gamma1 < 0.0 || c.gamma1 > 1.0) complain("gamma1: must lie in [0, 1]");
    if (c.gamma2 < 0.0 || c.gamma2 > 1.0) complain("gamma2: must lie in [0, 1]");
    if (c.beta0 < 0.0) complain("beta0: must be >= 0");
    if (c.per_sample_topk && c.pretrain_steps > 0) {
      complain("per_sample_topk: incompatible with a pretraining importance mask");
    }
  }
  if (c.output.empty()) complain("output: must not be empty");
  return bad;
}

void require_valid(const RunConfig& config) {
  auto problems = validate(config);
  if (!problems.empty()) throw ConfigError(problems);
}

double table4_sigma(const std::string& dataset, double eps) {
  struct Preset {
    double eps, sigma;
  };
  static const Preset mnist[] = {{2, 4.64}, {4, 2.49}, {6, 1.79},
                                 {8, 1.45}, {10, 1.25}, {12, 1.12}};
  static const Preset cifar10[] = {{2, 3.62}, {4, 1.98}, {6, 1.45},
                                   {8, 1.2},  {10, 1.05}, {12, 0.95}};
  const Preset* table = nullptr;
  std::size_t n = 0;
  if (dataset == "mnist") {
    table = mnist;
    n = std::size(mnist);
  } else if (dataset == "cifar10") {
    table = cifar10;
    n = std::size(cifar10);
  } else {
    throw std::invalid_argument("table4_sigma: unknown dataset '" + dataset + "'");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].eps == eps) return table[i].sigma;
  }
  throw std::invalid_argument("table4_sigma: no preset for eps = " + std::to_string(eps));
}

void write_config_header(std::ostream& os, const RunConfig& c) {
  std::ostringstream buf;
  buf.setf(std::ios::fmtflags(0), std::ios::floatfield);
  buf.precision(12);
  auto put = [&](const std::string& key, const auto& value) {
    buf << "# " << key << " = " << value << "\n";
  };
  put("dataset", c.dataset);
  if (c.dataset == "idx") {
    put("idx_images", c.idx_images);
    put("idx_labels", c.idx_labels);
    put("idx_test_images", c.idx_test_images);
    put("idx_test_labels", c.idx_test_labels);
    put("subset_n", c.subset_n);
  } else {
    put("synth_n", c.synth_n);
    put("synth_features", c.synth_features);
    put("synth_classes", c.synth_classes);
    put("synth_margin", c.synth_margin);
    put("test_fraction", c.test_fraction);
  }
  put("model", c.model);
  put("mlp_hidden", c.mlp_hidden);
  put("optimizer", c.optimizer);
  put("batch_size", c.batch_size);
  put("lr", c.lr);
  put("epochs", c.epochs);
  put("pretrain_steps", c.pretrain_steps);
  put("retention", c.retention);
  put("schedule", c.schedule);
  put("per_sample_topk", c.per_sample_topk ? "true" : "false");
  put("clip_bound", c.clip_bound);
  put("sigma", c.sigma);
  put("epsilon", c.epsilon);
  put("delta", c.delta);
  put("sigma_mode", c.sigma_mode);
  put("table4_dataset", c.table4_dataset);
  put("mu", c.mu);
  put("gamma1", c.gamma1);
  put("gamma2", c.gamma2);
  put("alpha0", c.alpha0);
  put("beta0", c.beta0);
  put("seed", c.seed);
  put("timing", c.timing ? "true" : "false");
  os << buf.str();
}

}  // namespace dpopt::harness
