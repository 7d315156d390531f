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
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "rostream/oracle.hpp"
#include "rostream/secretary.hpp"

namespace rostream {

using u64 = std::uint64_t;

namespace {

std::vector<u64> iota_values(std::size_t n, u64 from = 1) {
  std::vector<u64> v(n);
  std::iota(v.begin(), v.end(), from);
  return v;
}

struct ratio_stats {
  double mean;
  double standard_error;
};

ratio_stats mean_ratio(std::size_t n, std::size_t k, const quantile_estimator<u64>& est, int trials, u64 seed) {
  random_source rng(seed);
  std::vector<double> ratios;
  for (int t = 0; t < trials; ++t) {
    std::vector<u64> values;
    values.reserve(n);
    std::set<u64> used;
    while (values.size() < n) {
      const u64 v = rng() >> 12;
      if (used.insert(v).second) values.push_back(v);
    }
    const auto inst = make_instance(std::move(values), rng());
    stream_cursor<u64> cursor(inst);
    memory_meter meter;
    const auto log = choose_top_k(cursor, n, k, est, rng, meter);
    ratios.push_back(competitive_ratio(log, inst, k));
  }
  const double mu = std::accumulate(ratios.begin(), ratios.end(), 0.0) / trials;
  double ss = 0.0;
  for (double r : ratios) ss += (r - mu) * (r - mu);
  return {mu, std::sqrt(ss / (trials - 1) / trials)};
}

}  // namespace

TEST(classic_secretary, single_element_is_accepted) {
  const auto inst = make_instance(std::vector<u64>{3}, 1);
  stream_cursor<u64> cursor(inst);
  const auto log = classic_secretary(cursor, 1);
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log.entries()[0].key, 3u);
}

TEST(classic_secretary, hand_trace) {
  const stream_instance<u64> inst({2, 1, 4, 3}, {0, 1, 2, 3});
  stream_cursor<u64> cursor(inst);
  const auto log = classic_secretary(cursor, 4);
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log.entries()[0].key, 4u);
  EXPECT_EQ(log.entries()[0].position, 3u);
}

TEST(classic_secretary, may_accept_nothing) {
  const stream_instance<u64> inst({9, 1, 4, 3}, {0, 1, 2, 3});
  stream_cursor<u64> cursor(inst);
  EXPECT_TRUE(classic_secretary(cursor, 4).empty());
  EXPECT_EQ(cursor.position(), 4u);
}

TEST(classic_secretary, picks_the_maximum_about_one_time_in_e) {
  const int trials = 50000;
  int best = 0;
  const auto values = iota_values(100);
  for (int t = 0; t < trials; ++t) {
    const auto inst = make_instance(values, static_cast<u64>(t));
    stream_cursor<u64> cursor(inst);
    const auto log = classic_secretary(cursor, 100);
    if (!log.empty() && log.entries()[0].key == 100) ++best;
  }
  EXPECT_GE(best / static_cast<double>(trials), 0.34);
}

TEST(acceptance_log, enforces_budget_and_order) {
  acceptance_log<u64> log(2, 1);
  log.accept(3, 10, 1);
  EXPECT_THROW(log.accept(2, 11, 1), contract_violation);
  log.accept(5, 12, 0);
  EXPECT_THROW(log.accept(9, 13, 1), contract_violation);
  EXPECT_EQ(log.accepted_at(0), 1u);
  EXPECT_EQ(log.accepted_at(1), 1u);
  std::ostringstream os;
  write_log(os, log);
  EXPECT_EQ(os.str(), "3 10 1\n5 12 0\n");
}

TEST(level_plan, read_intervals_are_disjoint_and_ordered) {
  for (std::size_t n : {1000, 1001, 4097, 10000}) {
    for (std::size_t k : {2, 3, 16, 100, 256, 1000}) {
      if (k > n) continue;
      const level_plan plan(n, k);
      for (unsigned i = 1; i < plan.levels; ++i) {
        const auto deeper = plan.estimator_reads(i + 1);
        const auto here = plan.estimator_reads(i);
        EXPECT_LT(deeper.last, here.first);
        EXPECT_LE(here.first, here.last);
        EXPECT_EQ(here.last - here.first + 1, plan.segment(i + 1));
        EXPECT_GE(plan.acceptance_region(i + 1).last - plan.acceptance_region(i + 1).first + 1, plan.quota(i + 1));
      }
    }
  }
}

TEST(second_half_estimator, k_one_returns_segment_maximum) {
  const auto inst = make_instance(iota_values(50), 2);
  stream_cursor<u64> cursor(inst);
  random_source rng(1);
  memory_meter meter;
  const auto x = second_half_estimator(cursor, 30, 1, oracle_estimator<u64>(), rng, meter);
  const auto seq = inst.sequence();
  EXPECT_EQ(x, extended<u64>(*std::max_element(seq.begin(), seq.begin() + 30)));
  EXPECT_EQ(cursor.position(), 30u);
  EXPECT_EQ(meter.peak(), 1u);
}

TEST(second_half_estimator, two_elements_target_two) {
  const stream_instance<u64> inst({8, 5}, {0, 1});
  stream_cursor<u64> cursor(inst);
  random_source rng(1);
  memory_meter meter;
  EXPECT_EQ(second_half_estimator(cursor, 2, 2, oracle_estimator<u64>(), rng, meter), extended<u64>(5));
}

TEST(second_half_estimator, bottom_from_base_estimator_propagates) {
  // warm-up with a tiny sampling rate sees nothing
  const auto inst = make_instance(iota_values(40), 2);
  int bottoms = 0;
  for (u64 seed = 0; seed < 40; ++seed) {
    stream_cursor<u64> cursor(inst);
    random_source rng(seed);
    memory_meter meter;
    if (second_half_estimator(cursor, 10, 10, warmup_estimator<u64>(1), rng, meter).is_bottom()) ++bottoms;
  }
  EXPECT_GT(bottoms, 0);
}

TEST(second_half_estimator, exact_base_has_sqrt_k_error) {
  const std::size_t n = 10000;
  const std::size_t k = 200;
  const auto values = iota_values(n);
  random_source rng(200);
  double total = 0.0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    const auto inst = make_instance(values, rng());
    stream_cursor<u64> cursor(inst);
    memory_meter meter;
    const auto x = second_half_estimator(cursor, n, k, oracle_estimator<u64>(), rng, meter);
    ASSERT_TRUE(x.is_finite());
    total += std::abs(static_cast<double>(n + 1 - x.value()) - static_cast<double>(k));
  }
  EXPECT_LE(total / trials, 20 * std::sqrt(static_cast<double>(k)));
}

TEST(choose_top_k, k_equals_n_accepts_only_real_elements_within_budget) {
  for (std::size_t n : {1, 2, 7, 64, 100}) {
    const auto inst = make_instance(iota_values(n), n);
    stream_cursor<u64> cursor(inst);
    random_source rng(n);
    memory_meter meter;
    const auto log = choose_top_k(cursor, n, n, oracle_estimator<u64>(), rng, meter);
    EXPECT_LE(log.size(), n);
    EXPECT_EQ(cursor.position(), n);
    for (const auto& e : log.entries()) EXPECT_EQ(inst.at(e.position), e.key);
  }
}

TEST(choose_top_k, hand_trace_n4_k2) {
  // Plan: L = 1, n_1 = 2, q_1 = 1. The core rule runs on positions 1..2 with an
  // empty observation phase, so it takes 3 at once; the deepest threshold is
  // max(s_1, s_2) = 3 and position 3 (value 4) beats it.
  const stream_instance<u64> inst({3, 1, 4, 2}, {0, 1, 2, 3});
  stream_cursor<u64> cursor(inst);
  random_source rng(1);
  memory_meter meter;
  secretary_report<u64> report;
  const auto log = choose_top_k(cursor, 4, 2, oracle_estimator<u64>(), rng, meter, &report);
  ASSERT_EQ(report.thresholds.size(), 1u);
  EXPECT_EQ(report.thresholds[0], extended<u64>(3));
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log.entries()[0].key, 3u);
  EXPECT_EQ(log.entries()[0].level, 0u);
  EXPECT_EQ(log.entries()[1].key, 4u);
  EXPECT_EQ(log.entries()[1].position, 3u);
  EXPECT_EQ(log.entries()[1].level, 1u);
}

TEST(choose_top_k, budget_and_disjoint_reads_matching_the_plan) {
  random_source rng(12);
  for (std::size_t k : {1, 2, 3, 5, 16, 64, 100, 255, 256, 1000}) {
    const std::size_t n = 5000;
    const auto inst = make_instance(iota_values(n), k);
    stream_cursor<u64> cursor(inst);
    memory_meter meter;
    secretary_report<u64> report;
    const auto log = choose_top_k(cursor, n, k, approx_estimator<u64>(approx_config{16, 0.05}), rng, meter, &report);
    EXPECT_LE(log.size(), k);
    EXPECT_EQ(cursor.position(), n);
    const level_plan plan(n, k);
    ASSERT_EQ(report.estimator_reads.size(), plan.levels);
    for (unsigned j = 0; j < plan.levels; ++j) {
      EXPECT_EQ(report.estimator_reads[j], plan.estimator_reads(plan.levels - j));
      if (j > 0) {
        EXPECT_LT(report.estimator_reads[j - 1].last, report.estimator_reads[j].first);
      }
    }
    for (unsigned i = 1; i <= plan.levels; ++i) EXPECT_LE(log.accepted_at(i), plan.quota(i));
    EXPECT_LE(log.accepted_at(0), 1u);
    for (const auto& e : log.entries()) {
      EXPECT_EQ(inst.at(e.position), e.key);
      if (e.level > 0) {
        const auto region = plan.acceptance_region(e.level);
        EXPECT_GE(e.position, region.first);
        EXPECT_LE(e.position, region.last);
      } else {
        EXPECT_LE(e.position, plan.core_region().last);
      }
    }
  }
}

TEST(choose_top_k, bottom_threshold_accepts_greedily) {
  auto never = [](stream_cursor<u64>& cursor, std::size_t n, std::size_t, random_source&, memory_meter&) {
    cursor.skip(n);
    return extended<u64>::bottom();
  };
  const std::size_t n = 1000;
  const std::size_t k = 64;
  const auto inst = make_instance(iota_values(n), 5);
  stream_cursor<u64> cursor(inst);
  random_source rng(5);
  memory_meter meter;
  const auto log = choose_top_k<u64>(cursor, n, k, never, rng, meter);
  const level_plan plan(n, k);
  for (unsigned i = 1; i < plan.levels; ++i) {
    EXPECT_EQ(log.accepted_at(i), plan.quota(i));
    // greedy: the first q_i arrivals of the region
    std::size_t expected_pos = plan.acceptance_region(i).first;
    for (const auto& e : log.entries()) {
      if (e.level == i) {
        EXPECT_EQ(e.position, expected_pos++);
      }
    }
  }
}

TEST(choose_top_k, memory_is_estimator_peak_plus_constant) {
  for (std::size_t k : {16, 64, 256, 1024}) {
    const std::size_t n = 10000;
    const auto inst = make_instance(iota_values(n), k);
    stream_cursor<u64> cursor(inst);
    random_source rng(k);
    memory_meter meter;
    secretary_report<u64> report;
    choose_top_k(cursor, n, k, approx_estimator<u64>(approx_config{80, 0.05}), rng, meter, &report);
    EXPECT_LE(report.peak_words, report.estimator_peak + 32) << "k=" << k;
    EXPECT_LE(report.peak_words, 3 * 80 + 16 + 32) << "k=" << k;
    EXPECT_EQ(meter.current(), 0u);
  }
}

TEST(choose_top_k, decisions_depend_only_on_the_prefix) {
  // Two instances sharing the first half of the stream produce the same
  // acceptances inside that half.
  const std::size_t n = 2000;
  const std::size_t k = 64;
  auto values = iota_values(n);
  const auto a = make_instance(values, 31);
  auto arrival = a.arrival();
  std::reverse(arrival.begin() + n / 2, arrival.end());
  const stream_instance<u64> b(values, arrival);
  stream_cursor<u64> ca(a);
  stream_cursor<u64> cb(b);
  random_source ra(3);
  random_source rb(3);
  const auto la = choose_top_k(ca, n, k, oracle_estimator<u64>(), ra);
  const auto lb = choose_top_k(cb, n, k, oracle_estimator<u64>(), rb);
  std::vector<std::pair<std::size_t, u64>> pa;
  std::vector<std::pair<std::size_t, u64>> pb;
  for (const auto& e : la.entries()) {
    if (e.position <= n / 2) pa.emplace_back(e.position, e.key);
  }
  for (const auto& e : lb.entries()) {
    if (e.position <= n / 2) pb.emplace_back(e.position, e.key);
  }
  EXPECT_EQ(pa, pb);
}

TEST(choose_top_k, oracle_estimator_ratio_at_k100) {
  const auto stats = mean_ratio(10000, 100, oracle_estimator<u64>(), 300, 100);
  EXPECT_GE(stats.mean, 1 - 5 / std::sqrt(100.0));
  RecordProperty("mean_ratio", std::to_string(stats.mean));
}

TEST(competitive_ratio, extremes) {
  const auto inst = make_instance(std::vector<u64>{5, 1, 9, 3}, 4);
  acceptance_log<u64> all(2);
  acceptance_log<u64> none(2);
  std::size_t p9 = 0;
  std::size_t p5 = 0;
  for (std::size_t p = 1; p <= 4; ++p) {
    if (inst.at(p) == 9) p9 = p;
    if (inst.at(p) == 5) p5 = p;
  }
  all.accept(std::min(p9, p5), inst.at(std::min(p9, p5)), 0);
  all.accept(std::max(p9, p5), inst.at(std::max(p9, p5)), 0);
  EXPECT_DOUBLE_EQ(competitive_ratio(all, inst, 2), 1.0);
  EXPECT_DOUBLE_EQ(competitive_ratio(none, inst, 2), 0.0);
}

TEST(competitive_ratio, rejects_negative_values) {
  const auto inst = make_instance(std::vector<double>{-1.0, 2.0}, 1);
  acceptance_log<double> log(1);
  EXPECT_THROW(competitive_ratio(log, inst, 1), domain_error);
}

TEST(competitive_ratio, zero_one_counts_ones) {
  const double eps = 1e-9;
  std::vector<double> values;
  for (int i = 1; i <= 4; ++i) values.push_back(1 - i * eps);
  for (int j = 0; j < 6; ++j) values.push_back(j * eps / 10);
  const auto inst = make_instance(values, 2);
  acceptance_log<double> log(4);
  std::size_t ones = 0;
  for (std::size_t p = 1; p <= 10 && ones < 3; ++p) {
    if (inst.at(p) > 0.5) {
      log.accept(p, inst.at(p), 0);
      ++ones;
    }
  }
  EXPECT_NEAR(competitive_ratio(log, inst, 4), 3.0 / 4.0, 1e-8);
}

}  // namespace rostream
