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

#ifndef ROSTREAM_HARNESS_HPP_
#define ROSTREAM_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "extended.hpp"
#include "memory_meter.hpp"
#include "oracle.hpp"
#include "quantile_approx.hpp"
#include "quantile_exact.hpp"
#include "quantile_warmup.hpp"
#include "random.hpp"
#include "secretary.hpp"
#include "stream.hpp"

namespace rostream::harness {

/// The harness works on double keys; every family is exactly representable.
using key_type = double;

enum class run_mode { quantile_approx, quantile_exact, quantile_warmup, secretary };
enum class instance_family { uniform_distinct, zero_one_eps, adversarial_permuted_values };
enum class estimator_kind { oracle, approx, warmup };

inline std::string to_string(run_mode m) {
  switch (m) {
    case run_mode::quantile_approx: return "quantile-approx";
    case run_mode::quantile_exact: return "quantile-exact";
    case run_mode::quantile_warmup: return "quantile-warmup";
    default: return "secretary";
  }
}

inline std::string to_string(instance_family f) {
  switch (f) {
    case instance_family::uniform_distinct: return "uniform-distinct";
    case instance_family::zero_one_eps: return "zero-one-eps";
    default: return "adversarial-permuted-values";
  }
}

inline std::string to_string(estimator_kind e) {
  switch (e) {
    case estimator_kind::oracle: return "oracle";
    case estimator_kind::approx: return "approx";
    default: return "warmup";
  }
}

inline run_mode parse_mode(std::string_view s) {
  for (auto m : {run_mode::quantile_approx, run_mode::quantile_exact, run_mode::quantile_warmup, run_mode::secretary}) {
    if (to_string(m) == s) return m;
  }
  throw usage_error("unknown mode '" + std::string(s) + "'");
}

inline instance_family parse_family(std::string_view s) {
  for (auto f : {instance_family::uniform_distinct, instance_family::zero_one_eps,
                 instance_family::adversarial_permuted_values}) {
    if (to_string(f) == s) return f;
  }
  throw usage_error("unknown instance family '" + std::string(s) + "'");
}

inline estimator_kind parse_estimator(std::string_view s) {
  for (auto e : {estimator_kind::oracle, estimator_kind::approx, estimator_kind::warmup}) {
    if (to_string(e) == s) return e;
  }
  throw usage_error("unknown estimator '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Instance families

/// n distinct integers drawn uniformly from [0, 2^53), in random order.
inline stream_instance<key_type> gen_uniform_distinct_instance(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_uniform_distinct_instance: need n >= 1");
  random_source rng = random_source(seed).derive("values");
  std::unordered_set<std::uint64_t> seen;
  std::vector<key_type> values;
  values.reserve(n);
  while (values.size() < n) {
    const std::uint64_t v = rng() >> 11;
    if (seen.insert(v).second) values.push_back(static_cast<key_type>(v));
  }
  return make_instance(std::move(values), random_source(seed).derive("order")());
}

/**
 * k near-ones 1 - i*eps (i = 1..k) and n - k distinct near-zeros j*eps/n
 * (j = 0..n-k-1), in random order.
 */
inline stream_instance<key_type> gen_zero_one_eps_instance(std::size_t n, std::size_t k, double eps,
                                                           std::uint64_t seed) {
  if (k < 1 || k > n) throw invalid_target("gen_zero_one_eps_instance: need 1 <= k <= n");
  if (!(eps > 0.0) || !(eps < 1.0 / static_cast<double>(k + 1))) {
    throw domain_error("gen_zero_one_eps_instance: eps must lie in (0, 1/(k+1))");
  }
  std::vector<key_type> values;
  values.reserve(n);
  for (std::size_t i = 1; i <= k; ++i) values.push_back(1.0 - static_cast<double>(i) * eps);
  for (std::size_t j = 0; j < n - k; ++j) values.push_back(static_cast<double>(j) * eps / static_cast<double>(n));
  return make_instance(std::move(values), random_source(seed).derive("order")());
}

/// Values 1, 4, 9, ..., n^2 in random order.
inline stream_instance<key_type> gen_adversarial_instance(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_adversarial_instance: need n >= 1");
  std::vector<key_type> values;
  values.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) values.push_back(static_cast<double>(i) * static_cast<double>(i));
  return make_instance(std::move(values), random_source(seed).derive("order")());
}

// ---------------------------------------------------------------------------
// Configuration

struct experiment_config {
  run_mode mode = run_mode::quantile_approx;
  std::size_t n = 10000;
  std::vector<std::size_t> ks{100};
  std::optional<std::size_t> m;
  double c0 = 0.05;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  instance_family family = instance_family::uniform_distinct;
  estimator_kind estimator = estimator_kind::oracle;
  double eps = 1e-9;
  unsigned threads = 1;
  bool trace = false;

  void validate() const {
    if (trials < 1) throw usage_error("trials must be >= 1");
    if (n < 1) throw usage_error("n must be >= 1");
    if (ks.empty()) throw usage_error("at least one k is required");
    for (std::size_t k : ks) {
      if (k < 1 || k > n) throw usage_error("k=" + std::to_string(k) + " outside [1, n]");
    }
    if (!(c0 > 0.0 && c0 < 0.5)) throw usage_error("c0 must lie in (0, 1/2)");
    if (m && *m < 1) throw usage_error("m must be >= 1");
    if (mode == run_mode::quantile_exact) {
      const std::size_t block = normalize_block_size(memory_for(ks.front()));
      if (block < 4) throw usage_error("quantile-exact needs m >= 4");
    }
    if (!(eps > 0.0)) throw usage_error("eps must be positive");
    if (threads < 1) throw usage_error("threads must be >= 1");
  }

  /// Memory parameter for target k: the configured m, or a per-mode default.
  std::size_t memory_for(std::size_t k) const {
    if (m) return *m;
    const auto root = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(k))));
    switch (mode) {
      case run_mode::quantile_exact: return 4 * root;
      case run_mode::quantile_warmup: return root;
      case run_mode::secretary: return estimator == estimator_kind::warmup ? root : approx_config::default_memory(k);
      default: return approx_config::default_memory(k);
    }
  }

  /// eps actually used for target k: shrunk to 0.5/(k+1) when too large.
  double eps_for(std::size_t k) const {
    const double limit = 1.0 / static_cast<double>(k + 1);
    return eps < limit ? eps : 0.5 * limit;
  }
};

inline stream_instance<key_type> make_family_instance(const experiment_config& cfg, std::size_t k,
                                                      std::uint64_t seed) {
  switch (cfg.family) {
    case instance_family::uniform_distinct: return gen_uniform_distinct_instance(cfg.n, seed);
    case instance_family::zero_one_eps: return gen_zero_one_eps_instance(cfg.n, k, cfg.eps_for(k), seed);
    default: return gen_adversarial_instance(cfg.n, seed);
  }
}

// ---------------------------------------------------------------------------
// Trials

struct trial_record {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::optional<key_type> returned;   // absent for bottom or failure
  std::size_t returned_rank = 0;      // n + 1 for bottom, 0 for failure
  std::size_t abs_error = 0;
  bool success = false;
  std::size_t peak_words = 0;
  std::string estimator;
  std::size_t accepted_count = 0;
  double accepted_sum = 0.0;
  double opt = 0.0;
  double ratio = 0.0;
  std::vector<int> violated_conditions;
  std::vector<std::string> trace_lines;
};

inline quantile_estimator<key_type> make_estimator(const experiment_config& cfg, std::size_t k) {
  switch (cfg.estimator) {
    case estimator_kind::oracle: return oracle_estimator<key_type>();
    case estimator_kind::approx: return approx_estimator<key_type>(approx_config{cfg.memory_for(k), cfg.c0});
    default: return warmup_estimator<key_type>(cfg.memory_for(k));
  }
}

inline void fill_rank(trial_record& rec, const stream_instance<key_type>& inst, const extended<key_type>& out) {
  if (out.is_finite()) {
    rec.returned = out.value();
    rec.returned_rank = oracle::true_rank(inst.values(), out.value());
  } else {
    rec.returned_rank = rec.n + 1;
  }
  rec.abs_error = rec.returned_rank > rec.k ? rec.returned_rank - rec.k : rec.k - rec.returned_rank;
  rec.success = rec.abs_error == 0;
}

/// One trial. Deterministic in (cfg, k, trial).
inline trial_record run_trial(const experiment_config& cfg, std::size_t k, std::size_t trial) {
  trial_record rec;
  rec.trial = trial;
  rec.seed = cfg.seed ^ static_cast<std::uint64_t>(trial);
  rec.n = cfg.n;
  rec.k = k;
  rec.m = cfg.memory_for(k);
  const random_source base(rec.seed);
  const auto inst = make_family_instance(cfg, k, base.derive("instance")());
  random_source rng = base.derive("algorithm");
  stream_cursor<key_type> cursor(inst);
  memory_meter meter;

  switch (cfg.mode) {
    case run_mode::quantile_approx: {
      fill_rank(rec, inst, estimate_quantile(cursor, cfg.n, k, approx_config{rec.m, cfg.c0}, rng, meter));
      break;
    }
    case run_mode::quantile_warmup: {
      fill_rank(rec, inst, warmup_select(cursor, cfg.n, k, rec.m, rng, meter));
      break;
    }
    case run_mode::quantile_exact: {
      rec.m = normalize_block_size(rec.m);
      random_source replay = rng;
      exact_trace trace;
      try {
        fill_rank(rec, inst, extended<key_type>(exact_select(cursor, cfg.n, k, rec.m, rng, meter, &trace)));
      } catch (const selection_failure&) {
        rec.returned_rank = 0;
        rec.abs_error = k;
        rec.success = false;
      }
      if (cfg.trace) {
        const auto schedule = build_schedule(cfg.n, k, replay);
        for (const auto& v : check_good_event(build_good_event_trace(inst, schedule, rec.m))) {
          rec.violated_conditions.push_back(v.condition);
        }
        for (const auto& st : trace.stages) rec.trace_lines.push_back(format_stage_record(st));
      }
      break;
    }
    case run_mode::secretary: {
      rec.estimator = to_string(cfg.estimator);
      const auto log = choose_top_k(cursor, cfg.n, k, make_estimator(cfg, k), rng, meter);
      rec.accepted_count = log.size();
      rec.accepted_sum = log.sum();
      rec.opt = oracle::opt_sum(inst.values(), k);
      rec.ratio = competitive_ratio(log, inst, k);
      rec.success = true;
      break;
    }
  }
  rec.peak_words = meter.peak();
  return rec;
}

struct summary {
  std::size_t k = 0;
  std::size_t trials = 0;
  double mean_error = 0.0;
  double median_error = 0.0;
  double stderr_error = 0.0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
  double mean_ratio = 0.0;
  double min_ratio = 0.0;
  double stderr_ratio = 0.0;
  std::size_t max_peak_words = 0;
};

struct interval {
  double low;
  double high;
};

/// Wilson score interval for a binomial proportion (default z: 95%).
inline interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054) {
  if (trials == 0) throw usage_error("wilson_interval: no trials");
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double centre = (p + z2 / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
  return interval{std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

inline double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double standard_error_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

inline double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t h = xs.size() / 2;
  return xs.size() % 2 == 1 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
}

inline summary summarize(const std::vector<trial_record>& records) {
  if (records.empty()) throw usage_error("summarize: no records");
  summary s;
  s.k = records.front().k;
  s.trials = records.size();
  std::vector<double> errors;
  std::vector<double> ratios;
  errors.reserve(records.size());
  ratios.reserve(records.size());
  for (const auto& r : records) {
    errors.push_back(static_cast<double>(r.abs_error));
    ratios.push_back(r.ratio);
    if (r.success) ++s.successes;
    s.max_peak_words = std::max(s.max_peak_words, r.peak_words);
  }
  s.mean_error = mean_of(errors);
  s.median_error = median_of(errors);
  s.stderr_error = standard_error_of(errors);
  s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.trials);
  const interval w = wilson_interval(s.successes, s.trials);
  s.wilson_low = w.low;
  s.wilson_high = w.high;
  s.mean_ratio = mean_of(ratios);
  s.min_ratio = *std::min_element(ratios.begin(), ratios.end());
  s.stderr_ratio = standard_error_of(ratios);
  return s;
}

struct experiment_result {
  std::vector<trial_record> records;  // grouped by k (in config order), then by trial
  std::vector<summary> summaries;     // one per k
};

/// All trials for every k, spread over cfg.threads workers. Output order does
/// not depend on scheduling.
inline experiment_result run_experiment(const experiment_config& cfg) {
  cfg.validate();
  const std::size_t jobs = cfg.ks.size() * cfg.trials;
  std::vector<trial_record> records(jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs) return;
      try {
        records[j] = run_trial(cfg, cfg.ks[j / cfg.trials], j % cfg.trials);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs);
      }
    }
  };

  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(cfg.threads, jobs));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  experiment_result result;
  result.records = std::move(records);
  for (std::size_t i = 0; i < cfg.ks.size(); ++i) {
    const auto first = result.records.begin() + static_cast<std::ptrdiff_t>(i * cfg.trials);
    result.summaries.push_back(summarize(std::vector<trial_record>(first, first + static_cast<std::ptrdiff_t>(cfg.trials))));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Output

inline constexpr std::string_view quantile_csv_header = "trial,seed,n,k,m,returned_rank,abs_error,success,peak_words";
inline constexpr std::string_view secretary_csv_header =
    "trial,seed,n,k,estimator,accepted_count,accepted_sum,opt,ratio,peak_words";

inline void write_csv(std::ostream& os, run_mode mode, const std::vector<trial_record>& records) {
  const auto old_precision = os.precision(17);
  if (mode == run_mode::secretary) {
    os << secretary_csv_header << '\n';
    for (const auto& r : records) {
      os << r.trial << ',' << r.seed << ',' << r.n << ',' << r.k << ',' << r.estimator << ',' << r.accepted_count
         << ',' << r.accepted_sum << ',' << r.opt << ',' << r.ratio << ',' << r.peak_words << '\n';
    }
  } else {
    os << quantile_csv_header << '\n';
    for (const auto& r : records) {
      os << r.trial << ',' << r.seed << ',' << r.n << ',' << r.k << ',' << r.m << ',' << r.returned_rank << ','
         << r.abs_error << ',' << (r.success ? 1 : 0) << ',' << r.peak_words << '\n';
    }
  }
  os.precision(old_precision);
}

/// Per-trial good-event violations and stage lines (quantile-exact, traced runs).
inline void write_trace(std::ostream& os, const std::vector<trial_record>& records) {
  for (const auto& r : records) {
    os << "trial=" << r.trial << " k=" << r.k << " violations=";
    for (std::size_t i = 0; i < r.violated_conditions.size(); ++i) {
      os << (i ? "," : "") << r.violated_conditions[i];
    }
    os << '\n';
    for (const auto& line : r.trace_lines) os << "  " << line << '\n';
  }
}

inline void write_summary(std::ostream& os, const experiment_config& cfg, const std::vector<summary>& summaries) {
  const auto old_precision = os.precision(6);
  for (const auto& s : summaries) {
    os << "mode=" << to_string(cfg.mode) << '\n'
       << "k=" << s.k << '\n'
       << "m=" << cfg.memory_for(s.k) << '\n'
       << "trials=" << s.trials << '\n';
    if (cfg.mode == run_mode::secretary) {
      os << "estimator=" << to_string(cfg.estimator) << '\n'
         << "mean_ratio=" << s.mean_ratio << '\n'
         << "stderr_ratio=" << s.stderr_ratio << '\n'
         << "min_ratio=" << s.min_ratio << '\n';
    } else {
      os << "mean_error=" << s.mean_error << '\n'
         << "median_error=" << s.median_error << '\n'
         << "stderr_error=" << s.stderr_error << '\n'
         << "success_rate=" << s.success_rate << '\n'
         << "success_wilson_low=" << s.wilson_low << '\n'
         << "success_wilson_high=" << s.wilson_high << '\n';
    }
    os << "max_peak_words=" << s.max_peak_words << '\n';
  }
  os.precision(old_precision);
}

}  // namespace rostream::harness

#endif  // ROSTREAM_HARNESS_HPP_
