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

#include "dpopt/harness/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>

#include "dpopt/core/rng.hpp"
#include "dpopt/data/idx.hpp"
#include "dpopt/data/sampler.hpp"
#include "dpopt/data/synth.hpp"
#include "dpopt/models/builtin.hpp"
#include "dpopt/optim/pipeline.hpp"
#include "dpopt/privacy/accountant.hpp"

namespace dpopt::harness {

namespace {

// Substream ids per run seed; keeps init, batching, and noise independent.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kBatchStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::uint64_t kTestDataStream = 0x7e57;

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
};

Evaluation evaluate(const models::Model& model, const core::ParamVector& params,
                    const data::Dataset& ds) {
  Evaluation ev;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    ev.loss += model.loss(params, ds.row(i), ds.labels[i]);
    if (model.predict(params, ds.row(i)) == ds.labels[i]) ++correct;
  }
  ev.loss /= static_cast<double>(ds.size());
  ev.accuracy = static_cast<double>(correct) / static_cast<double>(ds.size());
  return ev;
}

void format_record(std::string& out, const EpochRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "step=%ld epoch=%zu train_loss=%.6f train_acc=%.6f test_acc=%.6f "
                "eps_spent=%.6f retention=%.6f wall_time=%.6f\n",
                r.step, r.epoch, r.train_loss, r.train_acc, r.test_acc, r.eps_spent,
                r.retention_r_t, r.wall_time);
  out += buf;
}

}  // namespace

RunResult run_experiment(const RunConfig& config) {
  require_valid(config);
  const auto start_time = std::chrono::steady_clock::now();

  // Datasets.
  data::Dataset train, test;
  if (config.dataset == "synth") {
    train = data::synth_classification(config.seed, config.synth_n, config.synth_features,
                                       config.synth_classes, config.synth_margin);
    const auto n_test = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(
               config.test_fraction * static_cast<double>(config.synth_n))));
    test = data::synth_classification(config.seed ^ kTestDataStream, n_test,
                                      config.synth_features, config.synth_classes,
                                      config.synth_margin);
  } else {
    train = data::load_idx_dataset(config.idx_images, config.idx_labels);
    if (!config.idx_test_images.empty()) {
      test = data::load_idx_dataset(config.idx_test_images, config.idx_test_labels);
    } else {
      test = train;  // inspection runs without a separate test file
    }
  }
  if (config.subset_n > 0) train = train.head(config.subset_n);
  const std::size_t n = train.size();
  if (config.batch_size > n) {
    throw ConfigError({"batch_size: exceeds training set size " + std::to_string(n)});
  }

  // Model on the image geometry (cnn keys off the feature count).
  const auto model = models::make_model(config.model, train.num_features,
                                        train.num_classes, config.mlp_hidden);

  // Step bookkeeping: epochs of ceil(N/B) steps, pretraining included in the
  // privacy accounting.
  const std::size_t steps_per_epoch = (n + config.batch_size - 1) / config.batch_size;
  const bool is_private = config.optimizer != "sgd";
  const std::size_t pretrain_steps = config.optimizer == "adadpigu" ? config.pretrain_steps : 0;
  const long total_steps =
      static_cast<long>(pretrain_steps + config.epochs * steps_per_epoch);
  const double q = static_cast<double>(config.batch_size) / static_cast<double>(n);

  double sigma = 0.0;
  if (is_private) {
    if (config.sigma_mode == "table4") {
      sigma = table4_sigma(config.table4_dataset, config.epsilon);
    } else if (config.sigma >= 0.0) {
      sigma = config.sigma;
    } else {
      sigma = privacy::dpsgd_sigma(config.epsilon, config.delta, q,
                                   static_cast<double>(total_steps));
    }
  }

  core::SeededRng init_rng(config.seed, kInitStream);
  core::SeededRng noise_rng(config.seed, kNoiseStream);
  data::BatchSampler sampler(core::SeededRng(config.seed, kBatchStream), n,
                             config.batch_size);

  core::ParamVector params = model->init_params(init_rng);
  const std::size_t d = params.size();

  std::unique_ptr<privacy::PrivacyLedger> ledger;
  if (is_private && sigma > 0.0) {
    ledger = std::make_unique<privacy::PrivacyLedger>(q, sigma, config.delta);
  }

  optim::ClipState clip_state(d, is_private ? config.clip_bound
                                            : std::numeric_limits<double>::infinity(),
                              sigma, config.mu, config.gamma1, config.gamma2,
                              config.alpha0, config.beta0);

  // Importance pretraining (Algorithm-1 style): DPSGD steps whose privatized
  // aggregate gradients feed the scores. Consumes ledger budget like any
  // other step.
  optim::ImportanceState importance(d);
  if (config.optimizer == "adadpigu" && pretrain_steps > 0) {
    for (std::size_t t = 0; t < pretrain_steps; ++t) {
      const auto batch = sampler.next_batch();
      const models::GradBatch grads = models::per_sample_grads(*model, params, train, batch);
      core::ParamVector sum(d, 0.0);
      for (std::size_t i = 0; i < grads.count; ++i) {
        const core::ParamVector clipped =
            optim::clip_per_sample(grads.row(i), config.clip_bound);
        for (std::size_t j = 0; j < d; ++j) sum[j] += clipped[j];
      }
      if (sigma > 0.0) {
        const core::ParamVector noise =
            core::gaussian_vector(noise_rng, d, sigma * config.clip_bound);
        for (std::size_t j = 0; j < d; ++j) sum[j] += noise[j];
      }
      const double inv_b = 1.0 / static_cast<double>(batch.size());
      core::ParamVector g_tilde(d, 0.0);
      for (std::size_t j = 0; j < d; ++j) g_tilde[j] = sum[j] * inv_b;
      optim::importance_accumulate(importance, g_tilde);
      for (std::size_t j = 0; j < d; ++j) params[j] -= config.lr * g_tilde[j];
      if (ledger) ledger->tick();
    }
    optim::finalize_scores(importance);
  }

  const long main_steps = static_cast<long>(config.epochs * steps_per_epoch);
  optim::UnfreezeSchedule schedule;
  schedule.mode = config.schedule == "linear" ? optim::ScheduleMode::kLinear
                                              : optim::ScheduleMode::kFixed;
  schedule.r0 = config.retention;
  schedule.total_steps = main_steps;

  optim::AdaDpiguOptions ada_options;
  ada_options.per_sample_topk = config.per_sample_topk;

  RunResult result;
  result.sigma_used = sigma;
  std::string body;

  long step = static_cast<long>(pretrain_steps);
  long t_main = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t s = 0; s < steps_per_epoch; ++s) {
      const auto batch = sampler.next_batch();
      ++t_main;
      ++step;
      if (config.optimizer == "adadpigu") {
        optim::adadpigu_step(params, *model, train, batch, importance, clip_state,
                             schedule, ledger.get(), noise_rng, config.lr, t_main,
                             ada_options);
      } else {
        // sgd shares the dpsgd path with clipping and noise disabled.
        optim::dpsgd_step(params, *model, train, batch, clip_state, ledger.get(),
                          noise_rng, config.lr);
      }
    }

    const Evaluation train_ev = evaluate(*model, params, train);
    const Evaluation test_ev = evaluate(*model, params, test);
    EpochRecord record;
    record.step = step;
    record.epoch = epoch;
    record.train_loss = train_ev.loss;
    record.train_acc = train_ev.accuracy;
    record.test_acc = test_ev.accuracy;
    // A private run with sigma == 0 adds no noise and so spends an unbounded
    // budget; the non-private baseline spends none.
    record.eps_spent = ledger ? ledger->epsilon()
                              : (is_private ? std::numeric_limits<double>::infinity() : 0.0);
    record.retention_r_t =
        config.optimizer == "adadpigu" ? optim::retention_at(schedule, t_main) : 1.0;
    if (config.timing) {
      record.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
              .count();
    }
    result.epochs.push_back(record);
    format_record(body, record);
  }

  const EpochRecord& last = result.epochs.back();
  result.final_train_loss = last.train_loss;
  result.final_train_acc = last.train_acc;
  result.final_test_acc = last.test_acc;
  result.steps_total = step;
  const double eps_unbounded =
      is_private ? std::numeric_limits<double>::infinity() : 0.0;
  result.eps_total = ledger ? ledger->epsilon() : eps_unbounded;
  result.eps_total_grid = ledger ? ledger->epsilon_grid() : eps_unbounded;
  result.metrics_path = config.output;

  std::ofstream out(config.output, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open metrics output: " + config.output);
  write_config_header(out, config);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "# sigma_used = %.9f\n# steps_total = %ld\n", sigma,
                result.steps_total);
  out << buf << body;
  std::snprintf(buf, sizeof(buf),
                "summary final_test_acc=%.6f final_train_acc=%.6f final_train_loss=%.6f "
                "eps_total=%.6f eps_grid=%.6f sigma=%.6f steps_total=%ld\n",
                result.final_test_acc, result.final_train_acc, result.final_train_loss,
                result.eps_total, result.eps_total_grid, result.sigma_used,
                result.steps_total);
  out << buf;
  return result;
}

SweepSummary sweep(const RunConfig& base, const std::string& axis,
                   const std::vector<double>& values, const std::string& seed_policy,
                   const std::string& summary_path) {
  if (values.size() < 2) {
    throw ConfigError({"sweep: need at least two axis values"});
  }
  if (axis != "retention" && axis != "epsilon" && axis != "batch") {
    throw ConfigError({"sweep: axis must be retention | epsilon | batch"});
  }
  if (seed_policy != "shared" && seed_policy != "increment") {
    throw ConfigError({"sweep: seed_policy must be shared | increment"});
  }

  SweepSummary summary;
  summary.axis = axis;
  for (std::size_t i = 0; i < values.size(); ++i) {
    RunConfig config = base;
    const double value = values[i];
    if (axis == "retention") {
      config.retention = value;
    } else if (axis == "epsilon") {
      config.epsilon = value;
      config.sigma = -1.0;
    } else {
      config.batch_size = static_cast<std::size_t>(value);
    }
    if (seed_policy == "increment") config.seed = base.seed + i;
    char suffix[64];
    std::snprintf(suffix, sizeof(suffix), ".%s_%g", axis.c_str(), value);
    config.output = base.output + suffix;

    SweepRow row;
    row.value = value;
    try {
      row.result = run_experiment(config);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    summary.rows.push_back(std::move(row));
  }

  std::ofstream out(summary_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open sweep summary: " + summary_path);
  out << "# sweep axis = " << axis << "\n";
  for (const auto& row : summary.rows) {
    char buf[256];
    if (row.ok) {
      std::snprintf(buf, sizeof(buf),
                    "value=%.6f status=ok final_test_acc=%.6f eps_total=%.6f "
                    "sigma=%.6f\n",
                    row.value, row.result.final_test_acc, row.result.eps_total,
                    row.result.sigma_used);
      out << buf;
    } else {
      std::snprintf(buf, sizeof(buf), "value=%.6f status=failed\n", row.value);
      out << buf << "# error: " << row.error << "\n";
    }
  }
  return summary;
}

}  // namespace dpopt::harness
