/*
 * Licensed to the Apache Software Foundation (ASF) under one
 * or more contributor license agreements.  See the NOTICE file
 * distributed with this work for additional information
 * regarding copyright ownership.  The ASF licenses this file
 * to you under the Apache License, Version 2.0 (the
 * "License"); you may not use this file except in compliance
 * with the License.  You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing,
 * software distributed under the License is distributed on an
 * "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
 * KIND, either express or implied.  See the License for the
 * specific language governing permissions and limitations
 * under the License.
 */

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rostream/harness.hpp"

namespace rostream::harness {

TEST(gen_zero_one_eps_instance, values_and_opt) {
  const double eps = 1e-6;
  const auto inst = gen_zero_one_eps_instance(100, 10, eps, 3);
  std::vector<double> v = inst.values();
  std::sort(v.begin(), v.end(), std::greater<>());
  for (int i = 1; i <= 10; ++i) EXPECT_DOUBLE_EQ(v[i - 1], 1 - i * eps);
  for (std::size_t j = 10; j < 100; ++j) {
    EXPECT_GE(v[j], 0.0);
    EXPECT_LT(v[j], eps);
  }
  EXPECT_NEAR(oracle::opt_sum(inst.values(), 10), 10 - eps * 10 * 11 / 2 + 0.0, 1e-9);
}

TEST(gen_zero_one_eps_instance, n_equals_k_and_guards) {
  const double eps = 1e-3;
  const auto inst = gen_zero_one_eps_instance(20, 20, eps, 1);
  for (double v : inst.values()) {
    EXPECT_GT(v, 1 - 20 * eps - 1e-12);
    EXPECT_LE(v, 1 - eps + 1e-12);
  }
  EXPECT_THROW(gen_zero_one_eps_instance(10, 0, 1e-9, 1), invalid_target);
  EXPECT_THROW(gen_zero_one_eps_instance(10, 4, 0.2, 1), domain_error);
  EXPECT_THROW(gen_zero_one_eps_instance(10, 4, 0.0, 1), domain_error);
}

TEST(instance_families, distinct_and_deterministic) {
  const auto a = gen_uniform_distinct_instance(5000, 8);
  const auto b = gen_uniform_distinct_instance(5000, 8);
  EXPECT_EQ(a.sequence(), b.sequence());
  for (double v : a.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, std::ldexp(1.0, 53));
    EXPECT_EQ(v, std::floor(v));
  }
  const auto sq = gen_adversarial_instance(100, 2);
  std::set<double> squares(sq.values().begin(), sq.values().end());
  EXPECT_TRUE(squares.count(1.0) && squares.count(10000.0));
}

TEST(experiment_config, eps_rescaling_and_validation) {
  experiment_config cfg;
  EXPECT_DOUBLE_EQ(cfg.eps_for(256), 1e-9);
  cfg.eps = 0.1;
  EXPECT_DOUBLE_EQ(cfg.eps_for(256), 0.5 / 257);
  experiment_config bad;
  bad.trials = 0;
  EXPECT_THROW(bad.validate(), usage_error);
  bad = experiment_config{};
  bad.ks = {bad.n + 1};
  EXPECT_THROW(bad.validate(), usage_error);
  bad = experiment_config{};
  bad.c0 = 0.5;
  EXPECT_THROW(bad.validate(), usage_error);
  EXPECT_THROW(parse_mode("nope"), usage_error);
  EXPECT_EQ(parse_family("zero-one-eps"), instance_family::zero_one_eps);
  EXPECT_EQ(parse_estimator("warmup"), estimator_kind::warmup);
}

TEST(wilson_interval, known_value) {
  const auto w = wilson_interval(450, 500);
  EXPECT_NEAR(w.low, 0.871, 5e-4);
  EXPECT_NEAR(w.high, 0.923, 5e-4);
  // independent evaluation of the same closed form
  const double z = 1.959963984540054;
  const double n = 500;
  const double p = 0.9;
  const double c = (p + z * z / (2 * n)) / (1 + z * z / n);
  const double h = z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  EXPECT_NEAR(w.low, c - h, 1e-12);
  EXPECT_NEAR(w.high, c + h, 1e-12);
}

TEST(summarize, small_cases) {
  trial_record r;
  r.k = 5;
  r.abs_error = 3;
  const auto one = summarize({r});
  EXPECT_DOUBLE_EQ(one.mean_error, 3.0);
  EXPECT_DOUBLE_EQ(one.median_error, 3.0);
  EXPECT_DOUBLE_EQ(one.stderr_error, 0.0);

  std::vector<trial_record> three(3, r);
  three[0].abs_error = 0;
  three[1].abs_error = 0;
  three[2].abs_error = 10;
  const auto s = summarize(three);
  EXPECT_DOUBLE_EQ(s.mean_error, 10.0 / 3);
  EXPECT_DOUBLE_EQ(s.median_error, 0.0);
  EXPECT_THROW(summarize({}), usage_error);
}

TEST(run_experiment, warmup_single_trial) {
  experiment_config cfg;
  cfg.mode = run_mode::quantile_warmup;
  cfg.n = 1;
  cfg.ks = {1};
  cfg.m = 1;
  cfg.trials = 1;
  const auto res = run_experiment(cfg);
  ASSERT_EQ(res.records.size(), 1u);
  EXPECT_EQ(res.records[0].abs_error, 0u);
  EXPECT_LE(res.records[0].peak_words, 4u);
  EXPECT_GE(res.records[0].peak_words, 1u);
}

TEST(run_experiment, warmup_meter_matches_hand_count) {
  experiment_config cfg;
  cfg.mode = run_mode::quantile_warmup;
  cfg.n = 2000;
  cfg.ks = {200};
  cfg.m = 5;
  cfg.trials = 20;
  for (const auto& r : run_experiment(cfg).records) {
    EXPECT_LE(r.peak_words, 5u + 2u);
    EXPECT_GE(r.peak_words, 2u);
  }
}

TEST(run_experiment, byte_identical_and_thread_independent) {
  experiment_config cfg;
  cfg.mode = run_mode::quantile_approx;
  cfg.n = 3000;
  cfg.ks = {50, 400};
  cfg.trials = 12;
  cfg.seed = 77;
  std::ostringstream a;
  std::ostringstream b;
  std::ostringstream c;
  write_csv(a, cfg.mode, run_experiment(cfg).records);
  write_csv(b, cfg.mode, run_experiment(cfg).records);
  cfg.threads = 4;
  write_csv(c, cfg.mode, run_experiment(cfg).records);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), c.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), std::string(quantile_csv_header));
}

TEST(run_experiment, trial_records_do_not_depend_on_execution_order) {
  experiment_config cfg;
  cfg.mode = run_mode::quantile_exact;
  cfg.n = 2000;
  cfg.ks = {64};
  cfg.trials = 10;
  const auto all = run_experiment(cfg).records;
  for (std::size_t t = 10; t-- > 0;) {
    const auto single = run_trial(cfg, 64, t);
    EXPECT_EQ(single.returned_rank, all[t].returned_rank);
    EXPECT_EQ(single.peak_words, all[t].peak_words);
    EXPECT_EQ(single.seed, cfg.seed ^ t);
  }
}

TEST(run_experiment, exact_sweep_reaches_success_target) {
  experiment_config cfg;
  cfg.mode = run_mode::quantile_exact;
  cfg.n = 20000;
  cfg.ks = {64, 256};
  cfg.trials = 500;
  cfg.threads = 2;
  const auto res = run_experiment(cfg);
  for (const auto& s : res.summaries) EXPECT_GE(s.success_rate, 0.85) << "k=" << s.k;
}

TEST(run_experiment, traced_exact_runs_report_conditions) {
  experiment_config cfg;
  cfg.mode = run_mode::quantile_exact;
  cfg.n = 4000;
  cfg.ks = {64};
  cfg.m = 8;
  cfg.trials = 30;
  cfg.trace = true;
  const auto res = run_experiment(cfg);
  std::ostringstream os;
  write_trace(os, res.records);
  EXPECT_NE(os.str().find("stage="), std::string::npos);
  for (const auto& r : res.records) {
    if (r.violated_conditions.empty()) {
      EXPECT_TRUE(r.success);
    }
  }
}

TEST(run_experiment, secretary_records) {
  experiment_config cfg;
  cfg.mode = run_mode::secretary;
  cfg.n = 2000;
  cfg.ks = {16};
  cfg.trials = 20;
  cfg.family = instance_family::zero_one_eps;
  cfg.estimator = estimator_kind::approx;
  const auto res = run_experiment(cfg);
  for (const auto& r : res.records) {
    EXPECT_LE(r.accepted_count, 16u);
    EXPECT_GE(r.ratio, 0.0);
    EXPECT_LE(r.ratio, 1.0 + 1e-12);
    EXPECT_EQ(r.estimator, "approx");
  }
  std::ostringstream os;
  write_csv(os, cfg.mode, res.records);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), std::string(secretary_csv_header));
  std::ostringstream summary;
  write_summary(summary, cfg, res.summaries);
  EXPECT_NE(summary.str().find("mean_ratio="), std::string::npos);
}

}  // namespace rostream::harness
