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

#ifndef DPOPT_HARNESS_TRAINER_HPP_
#define DPOPT_HARNESS_TRAINER_HPP_

#include <string>
#include <vector>

#include "dpopt/harness/config.hpp"

namespace dpopt::harness {

struct EpochRecord {
  long step = 0;
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double eps_spent = 0.0;
  double retention_r_t = 1.0;
  double wall_time = 0.0;
};

struct RunResult {
  std::vector<EpochRecord> epochs;
  double final_train_loss = 0.0;
  double final_train_acc = 0.0;
  double final_test_acc = 0.0;
  double eps_total = 0.0;       // closed-form accountant
  double eps_total_grid = 0.0;  // grid accountant
  double sigma_used = 0.0;
  long steps_total = 0;
  std::string metrics_path;
};

/// Validates the config, runs pretraining + training (or a baseline), writes
/// one record per epoch plus a summary line to config.output, and returns the
/// same numbers. Identical config + seed reproduces the file byte for byte
/// (timing off).
RunResult run_experiment(const RunConfig& config);

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;
  RunResult result;
};

struct SweepSummary {
  std::string axis;
  std::vector<SweepRow> rows;
};

/// One run per axis value (retention | epsilon | batch). Failures are
/// recorded and the sweep continues. seed_policy: "shared" reuses the base
/// seed, "increment" adds the value index.
SweepSummary sweep(const RunConfig& base, const std::string& axis,
                   const std::vector<double>& values, const std::string& seed_policy,
                   const std::string& summary_path);

}  // namespace dpopt::harness

#endif  // DPOPT_HARNESS_TRAINER_HPP_
