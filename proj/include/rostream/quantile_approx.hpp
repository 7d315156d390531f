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

#ifndef ROSTREAM_QUANTILE_APPROX_HPP_
#define ROSTREAM_QUANTILE_APPROX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "extended.hpp"
#include "memory_meter.hpp"
#include "random.hpp"
#include "stream.hpp"
#include "top_buffer.hpp"

namespace rostream {

/**
 * Parameters of the logarithmic-memory estimator.
 *
 * `m` is the length of the candidate array (and the exact-search cutoff: any
 * call with k <= m is answered exactly). `c0` sets the width of the window
 * in which the next threshold is searched, delta = max(1, floor(c0 * k)).
 *
 * Neither constant is pinned down by the underlying analysis beyond "m is
 * Omega(log k)" and "c0 is a small constant"; the defaults below are
 * engineering choices (m = ceil(8 log2(k+2)) with a floor of 16, c0 = 0.05).
 */
struct approx_config {
  std::size_t m = 16;
  double c0 = 0.05;

  static std::size_t default_memory(std::size_t k) {
    const auto scaled = static_cast<std::size_t>(std::ceil(8.0 * std::log2(static_cast<double>(k) + 2.0)));
    return std::max<std::size_t>(16, scaled);
  }

  static approx_config for_target(std::size_t k, double c0 = 0.05) { return approx_config{default_memory(k), c0}; }

  void validate() const {
    if (m < 1) throw std::invalid_argument("approx_config: m must be >= 1");
    if (!(c0 > 0.0 && c0 < 0.5)) throw std::invalid_argument("approx_config: c0 must lie in (0, 1/2)");
  }
};

inline std::size_t threshold_window(std::size_t k, double c0) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(c0 * static_cast<double>(k))));
}

/// Candidate threshold with its rank among the first-half elements below the
/// active threshold.
template<stream_key K>
struct threshold_entry {
  K element;
  std::size_t rank;
};

/**
 * Largest table element whose rank lies in [floor(k/2) - delta, floor(k/2) - 1].
 * The table is ordered by element descending (ranks ascending).
 */
template<stream_key K>
std::optional<K> select_threshold(std::span<const threshold_entry<K>> table, std::size_t k, std::size_t delta) {
  const auto half = static_cast<long long>(k / 2);
  const long long lo = half - static_cast<long long>(delta);
  const long long hi = half - 1;
  std::optional<K> best;
  for (const auto& entry : table) {
    const auto r = static_cast<long long>(entry.rank);
    if (r >= lo && r <= hi && (!best || *best < entry.element)) best = entry.element;
  }
  return best;
}

template<stream_key K>
std::optional<K> select_threshold(const std::vector<threshold_entry<K>>& table, std::size_t k, std::size_t delta) {
  return select_threshold(std::span<const threshold_entry<K>>(table), k, delta);
}

/**
 * Approximately the k-th largest among the next n elements that are strictly
 * below `a`, or bottom if fewer than k of them are below `a`.
 *
 * Reads exactly n elements. The recursion on the stream suffix runs as a loop;
 * every level that hands off to a deeper one keeps only a constant-size frame
 * (its threshold, target, running count below its threshold and running
 * minimum), which it keeps updating while the deeper levels read.
 */
template<stream_key K>
extended<K> find_kth(stream_cursor<K>& cursor, std::size_t n, std::size_t k, const extended<K>& a,
                     const approx_config& cfg, random_source& rng, memory_meter& meter) {
  cfg.validate();
  if (k < 1) throw invalid_target("find_kth: k must be >= 1");
  if (cursor.remaining() < n) {
    throw contract_violation("find_kth: cursor has " + std::to_string(cursor.remaining()) + " unread elements, need " +
                             std::to_string(n));
  }

  struct frame {
    extended<K> threshold;
    std::size_t target;
    std::size_t below = 0;
    std::optional<K> smallest;
  };
  constexpr std::size_t frame_words = 4;

  std::vector<frame> frames;
  word_lease frame_lease(meter, 0);

  auto read = [&]() -> const K& {
    const K& x = cursor.next();
    for (auto& f : frames) {
      if (f.threshold.above(x)) ++f.below;
      if (!f.smallest || x < *f.smallest) f.smallest = x;
    }
    return x;
  };

  std::size_t segment = n;
  std::size_t target = k;
  extended<K> threshold = a;
  extended<K> result = extended<K>::bottom();

  for (;;) {
    frames.push_back(frame{threshold, target, 0, std::nullopt});
    frame_lease.resize(frame_words * frames.size());

    if (target <= cfg.m) {
      word_lease scratch(meter, 1);
      top_buffer<K> top(target, meter);
      for (std::size_t i = 0; i < segment; ++i) {
        const K& x = read();
        if (threshold.above(x)) top.offer(x);
      }
      if (top.size() >= target) result = top.nth(target);
      break;
    }

    word_lease scratch(meter, 6);  // B, B1, read position, |s[1..B] below a|, delta, largest below a
    const auto half = static_cast<std::size_t>(sample_binomial(segment, 0.5, rng));
    const double rate = 2.0 * static_cast<double>(cfg.m) / (3.0 * static_cast<double>(target));
    const auto sampled = static_cast<std::size_t>(sample_binomial(half, rate, rng));

    std::size_t first_half_below = 0;
    std::optional<K> largest_below;
    auto note_below = [&](const K& x) {
      if (!largest_below || *largest_below < x) largest_below = x;
    };

    // Top m below the threshold among the sampled prefix; their ranks within
    // that prefix are 1..size by construction.
    std::vector<threshold_entry<K>> table;
    word_lease table_lease(meter, 0);
    {
      top_buffer<K> candidates(cfg.m, meter);
      for (std::size_t i = 0; i < sampled; ++i) {
        const K& x = read();
        if (threshold.above(x)) {
          ++first_half_below;
          note_below(x);
          candidates.offer(x);
        }
      }
      table.reserve(candidates.size());
      // rank field holds per-entry gap counts until the end of the first half
      for (const K& key : candidates.keys()) table.push_back(threshold_entry<K>{key, 0});
    }
    table_lease.resize(2 * table.size());

    // Complete ranks over s[1..B]: an arrival t below the threshold raises the
    // rank of every candidate <= t, i.e. a suffix starting at the first such one.
    for (std::size_t i = sampled; i < half; ++i) {
      const K& x = read();
      if (!threshold.above(x)) continue;
      ++first_half_below;
      note_below(x);
      if (table.empty() || x < table.back().element) continue;
      auto it = std::lower_bound(table.begin(), table.end(), x,
                                 [](const threshold_entry<K>& e, const K& v) { return v < e.element; });
      ++it->rank;
    }
    std::size_t running = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      running += table[i].rank;
      table[i].rank = i + 1 + running;
    }

    auto read_rest = [&]() {
      for (std::size_t i = half; i < segment; ++i) {
        const K& x = read();
        if (threshold.above(x)) note_below(x);
      }
    };

    if (first_half_below < target / 2) {
      read_rest();
      if (frames.back().smallest) result = *frames.back().smallest;
      break;
    }

    const std::size_t delta = threshold_window(target, cfg.c0);
    const std::optional<K> chosen = select_threshold(table, target, delta);
    if (!chosen) {
      read_rest();
      if (largest_below) result = *largest_below;
      break;
    }

    std::size_t chosen_rank = 0;
    for (const auto& e : table) {
      if (e.element == *chosen) chosen_rank = e.rank;
    }
    threshold = *chosen;
    target = target / 2 - chosen_rank;
    segment -= half;
  }

  // Innermost level first; each level reports bottom when fewer than its
  // target lie below its threshold, and otherwise turns a bottom from the
  // level it handed off to into its own minimum.
  if (frames.back().below < frames.back().target) result = extended<K>::bottom();
  for (std::size_t i = frames.size() - 1; i-- > 0;) {
    const frame& f = frames[i];
    if (f.below < f.target) {
      result = extended<K>::bottom();
    } else if (result.is_bottom()) {
      result = *f.smallest;
    }
  }
  return result;
}

template<stream_key K>
extended<K> find_kth(stream_cursor<K>& cursor, std::size_t n, std::size_t k, const extended<K>& a,
                     const approx_config& cfg, random_source& rng) {
  memory_meter meter;
  return find_kth(cursor, n, k, a, cfg, rng, meter);
}

/// Approximately the k-th largest of the next n elements, in O(log k) words.
template<stream_key K>
extended<K> estimate_quantile(stream_cursor<K>& cursor, std::size_t n, std::size_t k, const approx_config& cfg,
                              random_source& rng, memory_meter& meter) {
  if (k < 1 || k > n) {
    throw invalid_target("estimate_quantile: k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  return find_kth(cursor, n, k, extended<K>::top(), cfg, rng, meter);
}

template<stream_key K>
extended<K> estimate_quantile(stream_cursor<K>& cursor, std::size_t n, std::size_t k, const approx_config& cfg,
                              random_source& rng) {
  memory_meter meter;
  return estimate_quantile(cursor, n, k, cfg, rng, meter);
}

}  // namespace rostream

#endif  // ROSTREAM_QUANTILE_APPROX_HPP_
