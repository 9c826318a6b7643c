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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "dpopt/core/rng.hpp"
#include "dpopt/data/idx.hpp"
#include "dpopt/harness/bounds.hpp"
#include "dpopt/harness/config.hpp"
#include "dpopt/harness/trainer.hpp"
#include "dpopt/privacy/accountant.hpp"

using dpopt::harness::RunConfig;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string temp_path(const std::string& name) {
  return std::string("harness_test_") + name;
}

RunConfig small_synth_config(const std::string& tag) {
  RunConfig c;
  c.dataset = "synth";
  c.synth_n = 300;
  c.synth_features = 8;
  c.synth_classes = 3;
  c.synth_margin = 8.0;
  c.model = "logreg";
  c.optimizer = "sgd";
  c.batch_size = 30;
  c.lr = 0.2;
  c.epochs = 3;
  c.seed = 5;
  c.output = temp_path(tag);
  return c;
}

// Extracts the record lines (everything that is not a comment).
std::vector<std::string> record_lines(const std::string& contents) {
  std::vector<std::string> lines;
  std::istringstream in(contents);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config validation lists every offending field") {
  RunConfig c;
  c.dataset = "nonsense";
  c.model = "hal9000";
  c.optimizer = "dpsgd";
  c.sigma = -1.0;
  c.epsilon = -1.0;  // neither sigma nor epsilon
  c.retention = 1.5;
  c.lr = 0.0;
  const auto problems = dpopt::harness::validate(c);
  REQUIRE(problems.size() >= 5);
  bool saw_dataset = false, saw_model = false, saw_privacy = false, saw_r = false,
       saw_lr = false;
  for (const auto& p : problems) {
    saw_dataset = saw_dataset || p.find("dataset") != std::string::npos;
    saw_model = saw_model || p.find("model") != std::string::npos;
    saw_privacy = saw_privacy || p.find("sigma/epsilon") != std::string::npos;
    saw_r = saw_r || p.find("retention") != std::string::npos;
    saw_lr = saw_lr || p.find("lr") != std::string::npos;
  }
  CHECK(saw_dataset);
  CHECK(saw_model);
  CHECK(saw_privacy);
  CHECK(saw_r);
  CHECK(saw_lr);
}

TEST_CASE("config file parsing with overrides") {
  const std::string path = temp_path("config.cfg");
  {
    std::ofstream out(path);
    out << "# comment line\n";
    out << "optimizer = dpsgd\n";
    out << "sigma = 1.25\n";
    out << "batch_size = 64\n";
  }
  auto config = dpopt::harness::parse_config_file(path);
  CHECK(config.optimizer == "dpsgd");
  CHECK(config.sigma == 1.25);
  CHECK(config.batch_size == 64);
  dpopt::harness::apply_override(config, "batch_size", "32");
  CHECK(config.batch_size == 32);
  CHECK_THROWS_AS(dpopt::harness::apply_override(config, "no_such_key", "1"),
                  std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("non-private baseline separates wide-margin blobs") {
  auto config = small_synth_config("sgd_baseline.txt");
  config.synth_margin = 10.0;
  config.epochs = 8;
  const auto result = dpopt::harness::run_experiment(config);
  CHECK(result.final_train_acc >= 0.99);
  CHECK(result.eps_total == 0.0);
  std::remove(config.output.c_str());
}

TEST_CASE("metrics files are byte-identical across repeated runs") {
  auto config = small_synth_config("determinism_a.txt");
  config.optimizer = "dpsgd";
  config.sigma = 1.0;
  const auto first = dpopt::harness::run_experiment(config);
  const std::string contents_a = slurp(config.output);

  config.output = temp_path("determinism_b.txt");
  const auto second = dpopt::harness::run_experiment(config);
  const std::string contents_b = slurp(config.output);
  CHECK(contents_a == contents_b);
  CHECK(first.final_test_acc == second.final_test_acc);
  std::remove(temp_path("determinism_a.txt").c_str());
  std::remove(temp_path("determinism_b.txt").c_str());
}

TEST_CASE("adadpigu with benign statistics reproduces the dpsgd trajectory") {
  auto base = small_synth_config("reduction_dpsgd.txt");
  base.optimizer = "dpsgd";
  base.sigma = 0.8;
  base.clip_bound = 2.0;
  base.epochs = 4;
  const auto dpsgd_result = dpopt::harness::run_experiment(base);
  const auto dpsgd_records = record_lines(slurp(base.output));

  auto ada = base;
  ada.optimizer = "adadpigu";
  ada.retention = 1.0;
  ada.pretrain_steps = 0;
  ada.mu = 1.0;
  ada.alpha0 = 0.0;
  ada.beta0 = 0.0;
  ada.gamma1 = 1.0;
  ada.gamma2 = 1.0;
  ada.output = temp_path("reduction_ada.txt");
  const auto ada_result = dpopt::harness::run_experiment(ada);
  const auto ada_records = record_lines(slurp(ada.output));

  CHECK(dpsgd_records == ada_records);
  CHECK(dpsgd_result.final_test_acc == ada_result.final_test_acc);
  std::remove(base.output.c_str());
  std::remove(ada.output.c_str());
}

TEST_CASE("final eps matches the accountant for the total step count") {
  auto config = small_synth_config("eps_accounting.txt");
  config.optimizer = "adadpigu";
  config.sigma = 1.5;
  config.pretrain_steps = 4;
  config.retention = 0.5;
  config.epochs = 2;
  const auto result = dpopt::harness::run_experiment(config);
  const double q = 30.0 / 300.0;
  const long expected_steps = 4 + 2 * 10;
  CHECK(result.steps_total == expected_steps);
  CHECK(result.eps_total ==
        dpopt::privacy::dpsgd_epsilon(1.5, config.delta, q,
                                      static_cast<double>(expected_steps)));
  // eps_spent is nondecreasing across records
  double prev = 0.0;
  for (const auto& record : result.epochs) {
    CHECK(record.eps_spent >= prev);
    prev = record.eps_spent;
  }
  std::remove(config.output.c_str());
}

TEST_CASE("epsilon-targeted run derives sigma for pretrain + train steps") {
  auto config = small_synth_config("eps_target.txt");
  config.optimizer = "dpsgd";
  config.sigma = -1.0;
  config.epsilon = 3.0;
  config.epochs = 2;
  const auto result = dpopt::harness::run_experiment(config);
  const double q = 0.1;
  const double expected_sigma =
      dpopt::privacy::dpsgd_sigma(3.0, config.delta, q, 20.0);
  CHECK(result.sigma_used == doctest::Approx(expected_sigma).epsilon(1e-12));
  CHECK(result.eps_total == doctest::Approx(3.0).epsilon(1e-12));
  std::remove(config.output.c_str());
}

TEST_CASE("summary equals the last record") {
  auto config = small_synth_config("summary.txt");
  const auto result = dpopt::harness::run_experiment(config);
  CHECK(result.final_test_acc == result.epochs.back().test_acc);
  CHECK(result.final_train_acc == result.epochs.back().train_acc);
  std::remove(config.output.c_str());
}

TEST_CASE("sweep writes one row per value and keeps going after failures") {
  auto base = small_synth_config("sweep_base.txt");
  base.optimizer = "adadpigu";
  base.sigma = 1.0;
  base.pretrain_steps = 2;
  base.epochs = 1;
  const std::string summary_path = temp_path("sweep_summary.txt");
  const auto summary = dpopt::harness::sweep(base, "retention",
                                             {0.2, 0.4, 0.6, 0.8}, "shared", summary_path);
  CHECK(summary.rows.size() == 4);
  for (const auto& row : summary.rows) CHECK(row.ok);

  // batch axis with one impossible value: that run fails, the others survive.
  const auto mixed = dpopt::harness::sweep(base, "batch", {30, 10000}, "shared",
                                           summary_path);
  CHECK(mixed.rows.size() == 2);
  CHECK(mixed.rows[0].ok);
  CHECK_FALSE(mixed.rows[1].ok);

  CHECK_THROWS_AS(dpopt::harness::sweep(base, "retention", {0.5}, "shared", summary_path),
                  dpopt::harness::ConfigError);
  std::remove(summary_path.c_str());
  for (double r : {0.2, 0.4, 0.6, 0.8}) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s.retention_%g", base.output.c_str(), r);
    std::remove(buf);
  }
  std::remove((base.output + ".batch_30").c_str());
}

TEST_CASE("sweep results are independent of execution order") {
  auto base = small_synth_config("sweep_order.txt");
  base.optimizer = "dpsgd";
  base.sigma = 1.0;
  base.epochs = 1;
  const std::string summary_path = temp_path("sweep_order_summary.txt");
  const auto forward = dpopt::harness::sweep(base, "retention", {0.3, 0.6}, "shared",
                                             summary_path);
  const auto backward = dpopt::harness::sweep(base, "retention", {0.6, 0.3}, "shared",
                                              summary_path);
  REQUIRE(forward.rows.size() == 2);
  REQUIRE(backward.rows.size() == 2);
  CHECK(forward.rows[0].result.final_test_acc == backward.rows[1].result.final_test_acc);
  CHECK(forward.rows[1].result.final_test_acc == backward.rows[0].result.final_test_acc);
  std::remove(summary_path.c_str());
  std::remove((base.output + ".retention_0.3").c_str());
  std::remove((base.output + ".retention_0.6").c_str());
}

TEST_CASE("table4 presets override the accountant") {
  auto base = small_synth_config("table4.txt");
  base.optimizer = "dpsgd";
  base.sigma_mode = "table4";
  base.table4_dataset = "mnist";
  base.sigma = -1.0;
  base.epochs = 1;
  const std::string summary_path = temp_path("table4_summary.txt");
  const auto summary = dpopt::harness::sweep(base, "epsilon", {2.0, 4.0}, "shared",
                                             summary_path);
  REQUIRE(summary.rows.size() == 2);
  CHECK(summary.rows[0].result.sigma_used == 4.64);
  CHECK(summary.rows[1].result.sigma_used == 2.49);
  std::remove(summary_path.c_str());
  std::remove((base.output + ".epsilon_2").c_str());
  std::remove((base.output + ".epsilon_4").c_str());
}

TEST_CASE("idx-backed training runs end to end") {
  // Serialize a small synthetic image set and drive the full idx path:
  // load, subset, train privately, account for every step.
  dpopt::core::SeededRng rng(55);
  dpopt::data::IdxImages images;
  images.count = 120;
  images.rows = 4;
  images.cols = 4;
  images.pixels.resize(120 * 16);
  std::vector<int> labels(120);
  for (std::size_t i = 0; i < 120; ++i) {
    const int label = static_cast<int>(i % 2);
    labels[i] = label;
    for (std::size_t p = 0; p < 16; ++p) {
      // class 1 lights up the top-left quadrant
      const bool bright = label == 1 && p % 4 < 2 && p < 8;
      const double noise = 0.2 * rng.next_double();
      images.pixels[i * 16 + p] =
          std::floor((bright ? 0.8 : noise) * 255.0) / 255.0;
    }
  }
  const std::string img_path = temp_path("images.idx");
  const std::string lbl_path = temp_path("labels.idx");
  dpopt::data::write_file_bytes(img_path, dpopt::data::serialize_idx_images(images));
  dpopt::data::write_file_bytes(lbl_path, dpopt::data::serialize_idx_labels(labels));

  RunConfig config;
  config.dataset = "idx";
  config.idx_images = img_path;
  config.idx_labels = lbl_path;
  config.idx_test_images = img_path;
  config.idx_test_labels = lbl_path;
  config.subset_n = 100;
  config.model = "logreg";
  config.optimizer = "adadpigu";
  config.sigma = 1.0;
  config.pretrain_steps = 3;
  config.retention = 0.6;
  config.batch_size = 20;
  config.epochs = 4;
  config.lr = 0.5;
  config.seed = 9;
  config.output = temp_path("idx_run.txt");
  const auto result = dpopt::harness::run_experiment(config);
  CHECK(result.steps_total == 3 + 4 * 5);
  CHECK(result.final_test_acc > 0.9);  // trivially separable pattern
  CHECK(result.eps_total ==
        dpopt::privacy::dpsgd_epsilon(1.0, config.delta, 0.2, 23.0));
  std::remove(img_path.c_str());
  std::remove(lbl_path.c_str());
  std::remove(config.output.c_str());
}

TEST_CASE("clipped-sgd bound holds on the reference configuration") {
  dpopt::harness::ClippedSgdBoundConfig config;
  config.dim = 2;
  config.theta1_coord = 1.0;  // theta1 = (1, 1)
  config.clip = 10.0;
  config.sigma = 0.0;
  config.lr = 0.1;
  config.steps = 100;
  const auto report = dpopt::harness::check_bound_clipped_sgd(config);
  CHECK(report.pass);
  CHECK(report.lhs <= report.rhs + 1e-9);
}

TEST_CASE("clipped-sgd bound becomes trivial as the clip vanishes") {
  dpopt::harness::ClippedSgdBoundConfig config;
  config.clip = 1e-4;
  config.sigma = 0.0;
  const auto report = dpopt::harness::check_bound_clipped_sgd(config);
  CHECK(report.pass);
  // lhs collapses with the clip; rhs approaches delta_loss / (T eta)
  CHECK(report.lhs < 0.01 * report.rhs);
  const double delta_loss = 0.5 * config.theta1_coord * config.theta1_coord *
                            static_cast<double>(config.dim);
  CHECK(report.rhs == doctest::Approx(delta_loss / (100.0 * 0.1)).epsilon(1e-2));
}

TEST_CASE("clipped-sgd bound holds for a single step") {
  dpopt::harness::ClippedSgdBoundConfig config;
  config.steps = 1;
  const auto report = dpopt::harness::check_bound_clipped_sgd(config);
  CHECK(report.pass);
}

TEST_CASE("masked-sgd bound reference configuration and scaling") {
  dpopt::harness::MaskedSgdBoundConfig config;  // d=10, r=0.5, sigma=1, B=16, T=400
  const auto report = dpopt::harness::check_bound_masked_sgd(config);
  CHECK(report.pass);

  // with the empirical ingredients held fixed, doubling sigma raises the rhs
  // by exactly 3 d sigma^2 / (B^2 sqrt(T))
  const double rhs_doubled =
      dpopt::harness::masked_bound_rhs(report.alpha_min, report.delta_loss,
                                       report.sigma_g_sq, config.dim, config.batch,
                                       config.steps, 2.0 * config.sigma);
  const double expected_increase =
      3.0 * static_cast<double>(config.dim) * config.sigma * config.sigma /
      (static_cast<double>(config.batch) * static_cast<double>(config.batch) *
       std::sqrt(static_cast<double>(config.steps)));
  CHECK(rhs_doubled - report.rhs == doctest::Approx(expected_increase).epsilon(1e-12));
}

TEST_CASE("masked-sgd bound reduces to noiseless smooth sgd when disabled") {
  dpopt::harness::MaskedSgdBoundConfig config;
  config.retention = 1.0;
  config.sigma = 0.0;
  config.offset_scale = 0.0;  // full-batch: every sample shares the objective
  config.batch = 64;
  config.population = 64;
  const auto report = dpopt::harness::check_bound_masked_sgd(config);
  CHECK(report.pass);
}

TEST_CASE("both bound grids pass every cell") {
  for (const auto& report : dpopt::harness::clipped_sgd_bound_grid()) CHECK(report.pass);
  for (const auto& report : dpopt::harness::masked_sgd_bound_grid()) CHECK(report.pass);
}

}  // TEST_SUITE
