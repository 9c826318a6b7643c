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

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpopt/data/idx.hpp"
#include "dpopt/harness/bounds.hpp"
#include "dpopt/harness/config.hpp"
#include "dpopt/harness/trainer.hpp"
#include "dpopt/privacy/accountant.hpp"

namespace {

// Exit codes: 0 ok, 1 validation/usage, 2 runtime, 3 bound-check failure.
constexpr int kOk = 0;
constexpr int kValidationError = 1;
constexpr int kRuntimeError = 2;
constexpr int kBoundFailure = 3;

struct TrainArgs {
  std::string config_path;
  std::vector<std::string> overrides;
};

dpopt::harness::RunConfig resolve_config(const TrainArgs& args) {
  dpopt::harness::RunConfig config;
  if (!args.config_path.empty()) {
    config = dpopt::harness::parse_config_file(args.config_path);
  }
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw dpopt::harness::ConfigError({"override '" + kv + "' is not key=value"});
    }
    dpopt::harness::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  dpopt::harness::require_valid(config);
  return config;
}

void add_config_flags(CLI::App* cmd, TrainArgs& args) {
  cmd->add_option("--config", args.config_path, "config file (key = value lines)");
  cmd->add_option("--set", args.overrides,
                  "config override key=value, repeatable, applied after --config")
      ->take_all();
}

int run_train(const TrainArgs& args) {
  const auto config = resolve_config(args);
  const auto result = dpopt::harness::run_experiment(config);
  std::printf("wrote %s\n", result.metrics_path.c_str());
  std::printf(
      "final: test_acc=%.4f train_acc=%.4f eps=%.4f (grid %.4f) sigma=%.4f steps=%ld\n",
      result.final_test_acc, result.final_train_acc, result.eps_total,
      result.eps_total_grid, result.sigma_used, result.steps_total);
  return kOk;
}

int run_sweep(const TrainArgs& args, const std::string& axis,
              const std::vector<double>& values, const std::string& seed_policy,
              const std::string& summary_path) {
  const auto config = resolve_config(args);
  const auto summary = dpopt::harness::sweep(config, axis, values, seed_policy,
                                             summary_path);
  bool any_failed = false;
  for (const auto& row : summary.rows) {
    if (row.ok) {
      std::printf("value=%g final_test_acc=%.4f eps=%.4f sigma=%.4f\n", row.value,
                  row.result.final_test_acc, row.result.eps_total, row.result.sigma_used);
    } else {
      any_failed = true;
      std::printf("value=%g FAILED: %s\n", row.value, row.error.c_str());
    }
  }
  std::printf("wrote %s\n", summary_path.c_str());
  return any_failed ? kRuntimeError : kOk;
}

int run_accountant(double eps, double sigma, double delta, double q, long steps,
                   double sensitivity) {
  const bool has_eps = eps > 0.0;
  const bool has_sigma = sigma > 0.0;
  if (has_eps == has_sigma) {
    std::fprintf(stderr, "accountant: give exactly one of --eps / --sigma\n");
    return kValidationError;
  }
  const double t = static_cast<double>(steps);
  if (has_eps) {
    const double derived = dpopt::privacy::dpsgd_sigma(eps, delta, q, t);
    std::printf("closed-form sigma for (eps=%g, delta=%g, q=%g, steps=%ld): %.6f\n", eps,
                delta, q, steps, derived);
    const double back = dpopt::privacy::dpsgd_epsilon(derived, delta, q, t);
    const double grid = dpopt::privacy::grid_epsilon(q, derived, t, delta);
    std::printf("round-trip eps: closed-form %.6f, grid accountant %.6f\n", back, grid);
    if (back > 0.0 && std::abs(grid - back) / back > 0.05) {
      std::printf("warning: accountants disagree by more than 5%%\n");
    }
    const double single = dpopt::privacy::gaussian_sigma_for(sensitivity, eps, delta);
    std::printf("single-release gaussian sigma (sensitivity=%g): %.6f\n", sensitivity,
                single);
    const auto [amp_eps, amp_delta] = dpopt::privacy::amplify_by_subsampling(eps, delta, q);
    std::printf("subsampling amplification of (eps, delta): eps'=%.6f delta'=%.3e\n",
                amp_eps, amp_delta);
  } else {
    const double closed = dpopt::privacy::dpsgd_epsilon(sigma, delta, q, t);
    const double grid = dpopt::privacy::grid_epsilon(q, sigma, t, delta);
    std::printf("eps for (sigma=%g, delta=%g, q=%g, steps=%ld):\n", sigma, delta, q, steps);
    std::printf("  closed-form      %.6f\n", closed);
    std::printf("  grid accountant  %.6f\n", grid);
    if (closed > 0.0 && std::abs(grid - closed) / closed > 0.05) {
      std::printf("warning: accountants disagree by more than 5%%\n");
    }
    const auto [amp_eps, amp_delta] =
        dpopt::privacy::amplify_by_subsampling(closed, delta, q);
    std::printf("subsampling amplification of (eps, delta): eps'=%.6f delta'=%.3e\n",
                amp_eps, amp_delta);
  }
  return kOk;
}

struct BoundFlags {
  double clip = 10.0;
  double sigma = -1.0;  // < 0 = per-theorem default
  double lr = 0.1;
  long steps = 0;  // 0 = default
  double retention = 0.5;
  long batch = 0;
  double theta1 = -1.0;
};

int run_check_bounds(int theorem, bool grid, const BoundFlags& flags) {
  using dpopt::harness::BoundReport;
  std::vector<BoundReport> reports;
  std::string name;
  if (theorem == 6) {
    name = "clipped-sgd descent bound";
    if (grid) {
      reports = dpopt::harness::clipped_sgd_bound_grid();
    } else {
      dpopt::harness::ClippedSgdBoundConfig config;
      config.clip = flags.clip;
      if (flags.sigma >= 0.0) config.sigma = flags.sigma;
      config.lr = flags.lr;
      if (flags.steps > 0) config.steps = flags.steps;
      if (flags.batch > 0) config.batch = static_cast<std::size_t>(flags.batch);
      if (flags.theta1 >= 0.0) config.theta1_coord = flags.theta1;
      reports.push_back(dpopt::harness::check_bound_clipped_sgd(config));
    }
  } else if (theorem == 7) {
    name = "masked noisy-sgd gradient bound";
    if (grid) {
      reports = dpopt::harness::masked_sgd_bound_grid();
    } else {
      dpopt::harness::MaskedSgdBoundConfig config;
      config.retention = flags.retention;
      if (flags.sigma >= 0.0) config.sigma = flags.sigma;
      if (flags.steps > 0) config.steps = flags.steps;
      if (flags.batch > 0) config.batch = static_cast<std::size_t>(flags.batch);
      if (flags.theta1 >= 0.0) config.theta1_coord = flags.theta1;
      reports.push_back(dpopt::harness::check_bound_masked_sgd(config));
    }
  } else {
    std::fprintf(stderr, "check-bounds: --theorem must be 6 or 7\n");
    return kValidationError;
  }
  bool all_pass = true;
  for (const auto& r : reports) {
    std::printf("%s: %s %s\n", name.c_str(), r.pass ? "PASS" : "FAIL", r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  return all_pass ? kOk : kBoundFailure;
}

int run_parse_idx(const std::string& images_path, const std::string& labels_path) {
  if (!images_path.empty()) {
    const auto bytes = dpopt::data::read_file_bytes(images_path);
    const auto images = dpopt::data::parse_idx_images(bytes);
    double lo = 1.0, hi = 0.0;
    for (double p : images.pixels) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    std::printf("%s: %zu images of %zux%zu, pixel range [%.4f, %.4f]\n",
                images_path.c_str(), images.count, images.rows, images.cols, lo, hi);
  }
  if (!labels_path.empty()) {
    const auto bytes = dpopt::data::read_file_bytes(labels_path);
    const auto labels = dpopt::data::parse_idx_labels(bytes);
    std::vector<std::size_t> histogram(10, 0);
    for (int l : labels) {
      if (l >= 0 && l < 10) ++histogram[static_cast<std::size_t>(l)];
    }
    std::printf("%s: %zu labels, histogram:", labels_path.c_str(), labels.size());
    for (std::size_t c = 0; c < histogram.size(); ++c) {
      std::printf(" %zu:%zu", c, histogram[c]);
    }
    std::printf("\n");
  }
  if (images_path.empty() && labels_path.empty()) {
    std::fprintf(stderr, "parse-idx: give --images and/or --labels\n");
    return kValidationError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differentially private optimization toolkit"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "run one training experiment");
  add_config_flags(train_cmd, train_args);

  TrainArgs sweep_args;
  std::string sweep_axis = "retention";
  std::vector<double> sweep_values;
  std::string sweep_seed_policy = "shared";
  std::string sweep_summary = "sweep_summary.txt";
  auto* sweep_cmd = app.add_subcommand("sweep", "run one experiment per axis value");
  add_config_flags(sweep_cmd, sweep_args);
  sweep_cmd->add_option("--axis", sweep_axis, "retention | epsilon | batch");
  sweep_cmd->add_option("--values", sweep_values, "axis values")->required();
  sweep_cmd->add_option("--seed-policy", sweep_seed_policy, "shared | increment");
  sweep_cmd->add_option("--summary", sweep_summary, "summary output path");

  double acc_eps = -1.0, acc_sigma = -1.0, acc_delta = 1e-5, acc_q = 0.01;
  double acc_sensitivity = 1.0;
  long acc_steps = 1;
  auto* acc_cmd = app.add_subcommand("accountant", "sigma <-> eps conversions");
  acc_cmd->add_option("--eps", acc_eps, "target epsilon");
  acc_cmd->add_option("--sigma", acc_sigma, "noise multiplier");
  acc_cmd->add_option("--delta", acc_delta, "failure probability");
  acc_cmd->add_option("--q", acc_q, "sampling rate B/N");
  acc_cmd->add_option("--steps", acc_steps, "number of mechanism invocations");
  acc_cmd->add_option("--sensitivity", acc_sensitivity, "single-release L2 sensitivity");

  int bounds_theorem = 6;
  bool bounds_grid = false;
  BoundFlags bound_flags;
  auto* bounds_cmd = app.add_subcommand("check-bounds", "convergence bound checks");
  bounds_cmd->add_option("--theorem", bounds_theorem, "6 (clipped) or 7 (masked)");
  bounds_cmd->add_flag("--grid", bounds_grid, "run the full 3x3 grid");
  bounds_cmd->add_option("--clip", bound_flags.clip, "clip bound C (theorem 6)");
  bounds_cmd->add_option("--sigma", bound_flags.sigma, "noise level");
  bounds_cmd->add_option("--lr", bound_flags.lr, "learning rate (theorem 6)");
  bounds_cmd->add_option("--steps", bound_flags.steps, "simulation steps T");
  bounds_cmd->add_option("--retention", bound_flags.retention, "mask retention (theorem 7)");
  bounds_cmd->add_option("--batch", bound_flags.batch, "batch size B");
  bounds_cmd->add_option("--theta1", bound_flags.theta1, "start coordinate value");

  std::string idx_images, idx_labels;
  auto* idx_cmd = app.add_subcommand("parse-idx", "inspect idx dataset files");
  idx_cmd->add_option("--images", idx_images, "idx image file");
  idx_cmd->add_option("--labels", idx_labels, "idx label file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return run_train(train_args);
    if (sweep_cmd->parsed()) {
      return run_sweep(sweep_args, sweep_axis, sweep_values, sweep_seed_policy,
                       sweep_summary);
    }
    if (acc_cmd->parsed()) {
      return run_accountant(acc_eps, acc_sigma, acc_delta, acc_q, acc_steps,
                            acc_sensitivity);
    }
    if (bounds_cmd->parsed()) {
      return run_check_bounds(bounds_theorem, bounds_grid, bound_flags);
    }
    if (idx_cmd->parsed()) return run_parse_idx(idx_images, idx_labels);
  } catch (const dpopt::harness::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kValidationError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidationError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
  return kOk;
}
