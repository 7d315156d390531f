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

#ifndef ROSTREAM_SECRETARY_HPP_
#define ROSTREAM_SECRETARY_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "extended.hpp"
#include "memory_meter.hpp"
#include "oracle.hpp"
#include "quantile_approx.hpp"
#include "quantile_exact.hpp"
#include "quantile_warmup.hpp"
#include "random.hpp"
#include "stream.hpp"
#include "top_buffer.hpp"

namespace rostream {

template<stream_key K>
struct acceptance {
  std::size_t position;  // 1-based arrival position
  K key;
  unsigned level;        // plan level; 0 for the single-choice core
};

/**
 * Append-only record of irrevocable acceptances with a hard budget.
 * Level counters are indexed 0..levels.
 */
template<stream_key K>
class acceptance_log {
 public:
  explicit acceptance_log(std::size_t budget, unsigned levels = 0) : budget_(budget), per_level_(levels + 1, 0) {}

  void accept(std::size_t position, const K& key, unsigned level) {
    if (entries_.size() >= budget_) throw contract_violation("acceptance_log: budget exhausted");
    if (level >= per_level_.size()) throw contract_violation("acceptance_log: unknown level");
    if (!entries_.empty() && position <= entries_.back().position) {
      throw contract_violation("acceptance_log: acceptances must follow arrival order");
    }
    entries_.push_back(acceptance<K>{position, key, level});
    ++per_level_[level];
  }

  std::size_t budget() const { return budget_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<acceptance<K>>& entries() const { return entries_; }
  std::size_t accepted_at(unsigned level) const { return per_level_.at(level); }

  double sum() const {
    double s = 0.0;
    for (const auto& e : entries_) s += static_cast<double>(e.key);
    return s;
  }

 private:
  std::size_t budget_;
  std::vector<acceptance<K>> entries_;
  std::vector<std::size_t> per_level_;
};

/// One "position value level" line per acceptance.
template<stream_key K>
void write_log(std::ostream& os, const acceptance_log<K>& log) {
  for (const auto& e : log.entries()) os << e.position << ' ' << e.key << ' ' << e.level << '\n';
}

/// Closed 1-based interval of stream positions.
struct read_interval {
  std::size_t first = 0;
  std::size_t last = 0;
  friend bool operator==(const read_interval&, const read_interval&) = default;
};

/**
 * Static layout of the loop-form k-secretary. For level i = 1..L
 * (L = floor(log2 k)): segment n_i = floor(n/2^i), quota q_i = floor(k/2^i).
 * Level i accepts in (n_i, n_{i-1}] above a threshold estimated from
 * [n_i - floor(n_i/2) + 1, n_i] (the whole of [1, n_L] at the deepest level,
 * where only the maximum is needed). The single-choice rule runs on [1, n_L].
 */
struct level_plan {
  std::size_t n = 0;
  std::size_t k = 0;
  unsigned levels = 0;

  level_plan(std::size_t n_, std::size_t k_) : n(n_), k(k_) {
    if (k < 1 || k > n) throw invalid_target("level_plan: need 1 <= k <= n");
    levels = floor_log2(k);
  }

  std::size_t segment(unsigned i) const { return n >> i; }
  std::size_t quota(unsigned i) const { return k >> i; }

  read_interval estimator_reads(unsigned i) const {
    if (i == levels) return read_interval{1, segment(i)};
    return read_interval{segment(i) - segment(i) / 2 + 1, segment(i)};
  }
  read_interval acceptance_region(unsigned i) const { return read_interval{segment(i) + 1, segment(i - 1)}; }
  read_interval core_region() const { return read_interval{1, segment(levels)}; }
};

/// Quantile estimator plugged into the reduction: approximately the k-th
/// largest of the next n elements, reading exactly n of them.
template<stream_key K>
using quantile_estimator =
    std::function<extended<K>(stream_cursor<K>&, std::size_t n, std::size_t k, random_source&, memory_meter&)>;

/// Exact top-k buffer (k words).
template<stream_key K>
quantile_estimator<K> oracle_estimator() {
  return [](stream_cursor<K>& cursor, std::size_t n, std::size_t k, random_source&, memory_meter& meter) {
    word_lease counter(meter, 1);
    top_buffer<K> top(k, meter);
    for (std::size_t i = 0; i < n; ++i) top.offer(cursor.next());
    return top.size() >= k ? extended<K>(top.nth(k)) : extended<K>::bottom();
  };
}

template<stream_key K>
quantile_estimator<K> approx_estimator(approx_config cfg) {
  cfg.validate();
  return [cfg](stream_cursor<K>& cursor, std::size_t n, std::size_t k, random_source& rng, memory_meter& meter) {
    return find_kth(cursor, n, k, extended<K>::top(), cfg, rng, meter);
  };
}

template<stream_key K>
quantile_estimator<K> warmup_estimator(std::size_t m) {
  return [m](stream_cursor<K>& cursor, std::size_t n, std::size_t k, random_source& rng, memory_meter& meter) {
    return warmup_select(cursor, n, k, m, rng, meter);
  };
}

/// Observe floor(n/e) arrivals, then take the first one above everything observed.
template<stream_key K>
class single_choice_rule {
 public:
  explicit single_choice_rule(std::size_t n)
      : observe_(static_cast<std::size_t>(std::floor(static_cast<double>(n) / std::numbers::e))) {}

  /// Feed the arrival at 1-based offset `offset` within the segment; true means accept.
  bool offer(std::size_t offset, const K& x) {
    if (done_) return false;
    if (offset <= observe_) {
      if (best_ < extended<K>(x)) best_ = x;
      return false;
    }
    if (best_ < extended<K>(x)) {
      done_ = true;
      return true;
    }
    return false;
  }

  std::size_t observation_length() const { return observe_; }

 private:
  std::size_t observe_;
  extended<K> best_ = extended<K>::bottom();
  bool done_ = false;
};

template<stream_key K>
acceptance_log<K> classic_secretary(stream_cursor<K>& cursor, std::size_t n) {
  if (n < 1) throw std::invalid_argument("classic_secretary: need n >= 1");
  acceptance_log<K> log(1);
  single_choice_rule<K> rule(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const K& x = cursor.next();
    if (rule.offer(i, x)) log.accept(cursor.position(), x, 0);
  }
  return log;
}

/**
 * Wrapper that only looks at the tail of its segment. For k = 1 it returns the
 * maximum of all n elements. Otherwise it skips the first n - floor(n/2)
 * elements and runs `estimator` with target floor(k/2) on the last floor(n/2).
 * `already_read` leading elements of the segment are treated as consumed by
 * the caller (only valid for k >= 2 and within the skipped part).
 */
template<stream_key K>
extended<K> second_half_estimator(stream_cursor<K>& cursor, std::size_t n, std::size_t k,
                                  const quantile_estimator<K>& estimator, random_source& rng, memory_meter& meter,
                                  std::size_t already_read = 0) {
  if (n < 1) throw std::invalid_argument("second_half_estimator: need n >= 1");
  if (k < 1 || k > n) throw invalid_target("second_half_estimator: need 1 <= k <= n");
  if (k == 1) {
    if (already_read != 0) throw contract_violation("second_half_estimator: k = 1 must read the whole segment");
    word_lease best_word(meter, 1);
    extended<K> best = extended<K>::bottom();
    for (std::size_t i = 0; i < n; ++i) {
      const K& x = cursor.next();
      if (best < extended<K>(x)) best = x;
    }
    return best;
  }
  const std::size_t tail = n / 2;
  if (already_read > n - tail) throw contract_violation("second_half_estimator: caller consumed part of the tail");
  cursor.skip(n - tail - already_read);
  return estimator(cursor, tail, k / 2, rng, meter);
}

template<stream_key K>
struct secretary_report {
  std::vector<read_interval> estimator_reads;  // in execution order (deepest level first)
  std::vector<extended<K>> thresholds;         // x*_i for i = 1..L, index i-1
  std::size_t estimator_peak = 0;
  std::size_t peak_words = 0;
};

/**
 * Loop-form k-secretary in one pass: at most k acceptances, estimator calls
 * on pairwise disjoint intervals sharing one memory budget. Acceptance
 * decisions are taken by an observer on the cursor as each element is emitted,
 * concurrently with whichever estimator is reading.
 * A bottom threshold accepts greedily up to the level quota.
 */
template<stream_key K>
acceptance_log<K> choose_top_k(stream_cursor<K>& cursor, std::size_t n, std::size_t k,
                               const quantile_estimator<K>& estimator, random_source& rng, memory_meter& meter,
                               secretary_report<K>* report = nullptr) {
  const level_plan plan(n, k);
  if (cursor.remaining() < n) throw contract_violation("choose_top_k: cursor shorter than n");
  const std::size_t origin = cursor.position();
  acceptance_log<K> log(k, plan.levels);

  // level, level quota, level counter, region end, threshold, core offset,
  // core observed maximum, core decision flag
  word_lease own(meter, 8);
  memory_meter estimator_meter(&meter);

  struct region_state {
    bool core = true;
    unsigned level = 0;
    std::size_t quota = 0;
    std::size_t counter = 0;
    extended<K> threshold = extended<K>::bottom();
  } region;
  single_choice_rule<K> rule(plan.segment(plan.levels));

  cursor.set_observer([&](std::size_t position, const K& x) {
    const std::size_t offset = position - origin;
    if (region.core) {
      if (rule.offer(offset, x)) log.accept(offset, x, 0);
      return;
    }
    if (region.counter < region.quota && region.threshold < extended<K>(x)) {
      log.accept(offset, x, region.level);
      ++region.counter;
    }
  });

  auto run_estimator = [&](unsigned i, std::size_t already_read) {
    random_source level_rng = rng.derive(static_cast<std::uint64_t>(i));
    const std::size_t before = cursor.position() - origin;
    const extended<K> x = second_half_estimator(cursor, plan.segment(i), plan.quota(i), estimator, level_rng,
                                                estimator_meter, already_read);
    if (report != nullptr) {
      // skipped elements are not part of the estimator's read
      const read_interval planned = plan.estimator_reads(i);
      const std::size_t after = cursor.position() - origin;
      report->estimator_reads.push_back(read_interval{std::max(planned.first, before + 1), after});
    }
    return x;
  };

  try {
    if (plan.levels == 0) {
      cursor.skip(n);
    } else {
      extended<K> threshold = run_estimator(plan.levels, 0);
      std::vector<extended<K>> thresholds(plan.levels, extended<K>::bottom());
      for (unsigned i = plan.levels; i >= 1; --i) {
        thresholds[i - 1] = threshold;
        region = region_state{false, i, plan.quota(i), 0, threshold};
        if (i >= 2) {
          threshold = run_estimator(i - 1, plan.segment(i));
        } else {
          cursor.skip(plan.segment(0) - plan.segment(1));
        }
      }
      if (report != nullptr) report->thresholds = std::move(thresholds);
    }
  } catch (...) {
    cursor.clear_observer();
    throw;
  }
  cursor.clear_observer();

  if (report != nullptr) {
    report->estimator_peak = estimator_meter.peak();
    report->peak_words = meter.peak();
  }
  return log;
}

template<stream_key K>
acceptance_log<K> choose_top_k(stream_cursor<K>& cursor, std::size_t n, std::size_t k,
                               const quantile_estimator<K>& estimator, random_source& rng) {
  memory_meter meter;
  return choose_top_k(cursor, n, k, estimator, rng, meter);
}

/// Accepted sum over the sum of the k largest values. Values must be non-negative.
template<stream_key K>
double competitive_ratio(const acceptance_log<K>& log, const stream_instance<K>& inst, std::size_t k) {
  for (const K& v : inst.values()) {
    if (v < K{}) throw domain_error("competitive_ratio: instance has negative values");
  }
  const double opt = oracle::opt_sum(inst.values(), k);
  if (opt == 0.0) return 1.0;
  return log.sum() / opt;
}

}  // namespace rostream

#endif  // ROSTREAM_SECRETARY_HPP_
