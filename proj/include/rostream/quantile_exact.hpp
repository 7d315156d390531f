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

#ifndef ROSTREAM_QUANTILE_EXACT_HPP_
#define ROSTREAM_QUANTILE_EXACT_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "extended.hpp"
#include "memory_meter.hpp"
#include "random.hpp"
#include "stream.hpp"
#include "top_buffer.hpp"

namespace rostream {

enum class slot_kind : std::uint8_t { top, key, bottom, empty };

/**
 * One cell of the selection window. top/bottom act as +inf/-inf. empty is
 * not ordered at all: every comparison involving it is an explicit guard.
 */
template<stream_key K>
struct slot {
  slot_kind kind = slot_kind::empty;
  K key{};

  static slot top() { return slot{slot_kind::top, K{}}; }
  static slot bottom() { return slot{slot_kind::bottom, K{}}; }
  static slot empty() { return slot{slot_kind::empty, K{}}; }
  static slot of(const K& k) { return slot{slot_kind::key, k}; }

  bool is_key() const { return kind == slot_kind::key; }

  bool less_than(const K& q) const { return kind == slot_kind::bottom || (kind == slot_kind::key && key < q); }
  bool greater_than(const K& q) const { return kind == slot_kind::top || (kind == slot_kind::key && q < key); }

  friend bool operator==(const slot& a, const slot& b) {
    return a.kind == b.kind && (a.kind != slot_kind::key || a.key == b.key);
  }
};

template<stream_key K>
std::ostream& operator<<(std::ostream& os, const slot<K>& s) {
  switch (s.kind) {
    case slot_kind::top: return os << "TOP";
    case slot_kind::bottom: return os << "BOTTOM";
    case slot_kind::empty: return os << "EMPTY";
    default: return os << s.key;
  }
}

struct slot_census {
  std::size_t tops = 0;
  std::size_t keys = 0;
  std::size_t bottoms = 0;
  std::size_t empties = 0;
};

/**
 * Array of 3m cells holding consecutive order statistics of the prefix read
 * so far, in decreasing order, with the tracked element at index 3m/2.
 * Indexing is 1-based throughout.
 */
template<stream_key K>
class window {
 public:
  /// Initial state (TOP, BOTTOM, ..., BOTTOM). m must be even and >= 2.
  explicit window(std::size_t m) : m_(m), slots_(3 * m, slot<K>::bottom()) {
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("window: block size m must be even and >= 2");
    slots_[0] = slot<K>::top();
  }

  window(std::size_t m, std::vector<slot<K>> slots) : m_(m), slots_(std::move(slots)) {
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("window: block size m must be even and >= 2");
    if (slots_.size() != 3 * m) throw std::invalid_argument("window: need exactly 3m slots");
  }

  std::size_t block() const { return m_; }
  std::size_t size() const { return slots_.size(); }
  std::size_t center_index() const { return 3 * m_ / 2; }

  const slot<K>& operator[](std::size_t i) const { return slots_[i - 1]; }
  const slot<K>& center() const { return (*this)[center_index()]; }
  const std::vector<slot<K>>& slots() const { return slots_; }

  /**
   * Insert q if it extends the run of consecutive elements: locate the
   * smallest i* with M[i*] < q; drop q when there is none, when i* = 1, or
   * when M[i*-1] is empty. Otherwise shift toward whichever end keeps the
   * center slot fixed.
   */
  void insert(const K& q) {
    const std::size_t n = size();
    std::size_t star = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      if ((*this)[i].less_than(q)) {
        star = i;
        break;
      }
    }
    if (star <= 1 || (*this)[star - 1].kind == slot_kind::empty) return;
    if (star <= center_index()) {
      for (std::size_t i = 1; i + 2 <= star; ++i) at(i) = at(i + 1);
      at(star - 1) = slot<K>::of(q);
    } else {
      for (std::size_t i = n; i >= star + 1; --i) at(i) = at(i - 1);
      at(star) = slot<K>::of(q);
    }
  }

  /**
   * Shift left (d < 0) or right (d > 0) by |d|. Vacated cells become BOTTOM
   * (left shift) or TOP (right shift) when the boundary cell carried that
   * sentinel, and EMPTY otherwise. |d| >= 3m wipes the whole array.
   */
  void move(long long d) {
    const auto n = static_cast<long long>(size());
    if (d < 0) {
      const long long s = -d;
      const slot<K> fill = at(size()).kind == slot_kind::bottom ? slot<K>::bottom() : slot<K>::empty();
      for (long long i = 1; i <= n - s; ++i) at(static_cast<std::size_t>(i)) = at(static_cast<std::size_t>(i + s));
      for (long long i = std::max(1LL, n - s + 1); i <= n; ++i) at(static_cast<std::size_t>(i)) = fill;
    } else if (d > 0) {
      const slot<K> fill = at(1).kind == slot_kind::top ? slot<K>::top() : slot<K>::empty();
      for (long long i = n; i >= d + 1; --i) at(static_cast<std::size_t>(i)) = at(static_cast<std::size_t>(i - d));
      for (long long i = std::min(d, n); i >= 1; --i) at(static_cast<std::size_t>(i)) = fill;
    }
  }

  /// Base-stage filling: slots 2..3m keep the 3m-1 largest keys offered, in
  /// decreasing order, with BOTTOM after them.
  void base_offer(const K& q) {
    const std::size_t n = size();
    std::size_t pos = 0;
    for (std::size_t i = 2; i <= n; ++i) {
      if (at(i).less_than(q)) {
        pos = i;
        break;
      }
    }
    if (pos == 0) return;
    for (std::size_t i = n; i > pos; --i) at(i) = at(i - 1);
    at(pos) = slot<K>::of(q);
  }

  slot_census census() const {
    slot_census c;
    for (const auto& s : slots_) {
      switch (s.kind) {
        case slot_kind::top: ++c.tops; break;
        case slot_kind::key: ++c.keys; break;
        case slot_kind::bottom: ++c.bottoms; break;
        case slot_kind::empty: ++c.empties; break;
      }
    }
    return c;
  }

 private:
  slot<K>& at(std::size_t i) { return slots_[i - 1]; }

  std::size_t m_;
  std::vector<slot<K>> slots_;
};

/**
 * Structural window invariants, given the largest and smallest key seen so
 * far (absent when nothing has been seen):
 *   1. keys form one contiguous run;
 *   2. the run is strictly decreasing;
 *   3. each side of the run holds copies of a single sentinel kind;
 *   4. TOP appears only left of the run, and only if the run starts at the maximum;
 *   5. BOTTOM appears only right of the run, and only if the run ends at the minimum.
 * Consecutiveness with respect to the full prefix needs the whole prefix and
 * is left to callers that have it. Returns human-readable violations.
 */
template<stream_key K>
std::vector<std::string> window_violations(const window<K>& w, const std::optional<K>& max_seen,
                                           const std::optional<K>& min_seen) {
  std::vector<std::string> out;
  const std::size_t n = w.size();
  std::size_t first = 0;
  std::size_t last = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (w[i].is_key()) {
      if (first == 0) first = i;
      last = i;
    }
  }

  auto side_kinds = [&](std::size_t lo, std::size_t hi) {
    std::vector<slot_kind> kinds;
    for (std::size_t i = lo; i <= hi && i >= 1 && i <= n; ++i) {
      if (std::find(kinds.begin(), kinds.end(), w[i].kind) == kinds.end()) kinds.push_back(w[i].kind);
    }
    return kinds;
  };

  if (first == 0) {
    // No keys: at most a left sentinel run followed by a right one.
    std::size_t changes = 0;
    for (std::size_t i = 2; i <= n; ++i) {
      if (w[i].kind != w[i - 1].kind) ++changes;
    }
    if (changes > 1) out.emplace_back("3: more than two sentinel runs in a key-free window");
    for (std::size_t i = 2; i <= n; ++i) {
      if (w[i].kind == slot_kind::top && w[i - 1].kind != slot_kind::top) out.emplace_back("4: TOP right of another sentinel");
      if (w[i - 1].kind == slot_kind::bottom && w[i].kind != slot_kind::bottom) out.emplace_back("5: BOTTOM left of another sentinel");
    }
    return out;
  }

  for (std::size_t i = first; i <= last; ++i) {
    if (!w[i].is_key()) {
      out.emplace_back("1: key run interrupted at slot " + std::to_string(i));
      break;
    }
  }
  for (std::size_t i = first + 1; i <= last; ++i) {
    if (w[i - 1].is_key() && w[i].is_key() && !(w[i].key < w[i - 1].key)) {
      out.emplace_back("2: run not strictly decreasing at slot " + std::to_string(i));
      break;
    }
  }
  const auto left = first > 1 ? side_kinds(1, first - 1) : std::vector<slot_kind>{};
  const auto right = last < n ? side_kinds(last + 1, n) : std::vector<slot_kind>{};
  if (left.size() > 1) out.emplace_back("3: mixed sentinels left of the run");
  if (right.size() > 1) out.emplace_back("3: mixed sentinels right of the run");

  const bool top_left = std::find(left.begin(), left.end(), slot_kind::top) != left.end();
  const bool top_right = std::find(right.begin(), right.end(), slot_kind::top) != right.end();
  const bool bottom_left = std::find(left.begin(), left.end(), slot_kind::bottom) != left.end();
  const bool bottom_right = std::find(right.begin(), right.end(), slot_kind::bottom) != right.end();
  if (top_right) out.emplace_back("4: TOP right of the run");
  if (top_left && !(max_seen && w[first].key == *max_seen)) out.emplace_back("4: TOP left of a run that does not start at the maximum");
  if (bottom_left) out.emplace_back("5: BOTTOM left of the run");
  if (bottom_right && !(min_seen && w[last].key == *min_seen)) out.emplace_back("5: BOTTOM right of a run that does not end at the minimum");
  return out;
}

inline unsigned floor_log2(std::size_t k) { return static_cast<unsigned>(std::bit_width(k)) - 1; }

/**
 * Prefix boundaries B_0 = 0 <= B_1 <= ... <= B_{L+1} = n (L = floor(log2 k)),
 * with B_i ~ Binomial(B_{i+1}, 1/2) drawn backward from n, and stage targets
 * T_i = min(B_{i+1}, floor(k / 2^(L-i))).
 *
 * The draws come from a substream keyed by a single 64-bit seed, so a
 * streaming caller can regenerate any B_i on demand from one stored word.
 */
struct stage_schedule {
  std::size_t n = 0;
  std::size_t k = 0;
  unsigned levels = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> boundaries;  // B_0 .. B_{L+1}
  std::vector<std::size_t> targets;     // T_0 .. T_L

  /// min{i : T_i > m/2}, or nothing when every target is <= m/2.
  std::optional<unsigned> start_stage(std::size_t m) const {
    for (unsigned i = 0; i < targets.size(); ++i) {
      if (2 * targets[i] > m) return i;
    }
    return std::nullopt;
  }

  /// B_i recomputed from the seed alone.
  static std::size_t replay_boundary(std::size_t n, unsigned levels, std::uint64_t seed, unsigned i) {
    if (i == 0) return 0;
    if (i >= levels + 1) return n;
    random_source src(seed);
    std::size_t b = n;
    for (unsigned j = levels; j >= i; --j) b = static_cast<std::size_t>(sample_binomial(b, 0.5, src));
    return b;
  }

  static std::size_t target_for(std::size_t k, unsigned levels, std::size_t next_boundary, unsigned i) {
    return std::min(next_boundary, k >> (levels - i));
  }
};

/// Materialized schedule. Consumes exactly one draw from rng (the seed).
inline stage_schedule build_schedule(std::size_t n, std::size_t k, random_source& rng) {
  if (k < 1 || k > n) throw invalid_target("build_schedule: need 1 <= k <= n");
  stage_schedule s;
  s.n = n;
  s.k = k;
  s.levels = floor_log2(k);
  s.seed = rng();
  s.boundaries.assign(s.levels + 2, 0);
  s.boundaries[s.levels + 1] = n;
  random_source src(s.seed);
  for (unsigned i = s.levels; i >= 1; --i) {
    s.boundaries[i] = static_cast<std::size_t>(sample_binomial(s.boundaries[i + 1], 0.5, src));
  }
  s.targets.resize(s.levels + 1);
  for (unsigned i = 0; i <= s.levels; ++i) {
    s.targets[i] = stage_schedule::target_for(k, s.levels, s.boundaries[i + 1], i);
  }
  return s;
}

/// Lower bound on the probability that exact selection succeeds:
/// 1 - 12 L exp(-m/12) - 2 sum_{i<L} exp(-m^2 / (32 k / 2^i)), L = floor(log2 k).
/// May be negative for small m.
inline double success_probability_bound(std::size_t k, std::size_t m) {
  if (k < 2) throw invalid_target("success_probability_bound: need k >= 2");
  if (m < 1) throw std::invalid_argument("success_probability_bound: need m >= 1");
  const unsigned levels = floor_log2(k);
  const double md = static_cast<double>(m);
  double bound = 1.0 - 12.0 * levels * std::exp(-md / 12.0);
  for (unsigned i = 0; i < levels; ++i) {
    const double scale = static_cast<double>(k) / std::ldexp(1.0, static_cast<int>(i));
    bound -= 2.0 * std::exp(-md * md / (32.0 * scale));
  }
  return bound;
}

/// Per-stage record of an instrumented run.
struct stage_record {
  unsigned stage = 0;
  std::size_t begin = 0;  // B_i
  std::size_t end = 0;    // B_{i+1}
  std::size_t target = 0; // T_i
  std::size_t rank_before = 0;
  std::size_t rank_after = 0;
  slot_census census;     // after the move
};

struct exact_trace {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  unsigned levels = 0;
  std::uint64_t schedule_seed = 0;
  std::optional<unsigned> start_stage;
  bool fallback = false;
  std::vector<stage_record> stages;
};

inline std::string format_stage_record(const stage_record& r) {
  std::ostringstream os;
  os << "stage=" << r.stage << " begin=" << r.begin << " end=" << r.end << " target=" << r.target
     << " rank_before=" << r.rank_before << " rank_after=" << r.rank_after << " top=" << r.census.tops
     << " keys=" << r.census.keys << " bottom=" << r.census.bottoms << " empty=" << r.census.empties;
  return os.str();
}

/// Even block size used by exact selection; odd values are rounded up.
inline std::size_t normalize_block_size(std::size_t m) { return m % 2 == 0 ? m : m + 1; }

/**
 * Exact k-th largest of the next n elements using a 3m-cell window, with
 * high probability once m is of order sqrt(k).
 *
 * Stages i0..L follow the schedule; after each stage the window is shifted
 * so that the T_i-th largest element seen so far sits at the center. When
 * k <= m/2 no stage qualifies as i0 and an exact top-k buffer is used.
 * Throws selection_failure if the center slot is not a key at the end.
 */
template<stream_key K>
K exact_select(stream_cursor<K>& cursor, std::size_t n, std::size_t k, std::size_t m, random_source& rng,
               memory_meter& meter, exact_trace* trace = nullptr) {
  if (k < 1 || k > n) {
    throw invalid_target("exact_select: k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  m = normalize_block_size(m);
  if (m < 4) throw std::invalid_argument("exact_select: block size m must be >= 4");
  if (cursor.remaining() < n) throw contract_violation("exact_select: cursor shorter than n");

  const unsigned levels = floor_log2(k);
  const std::uint64_t schedule_seed = rng();
  if (trace != nullptr) {
    *trace = exact_trace{};
    trace->n = n;
    trace->k = k;
    trace->m = m;
    trace->levels = levels;
    trace->schedule_seed = schedule_seed;
  }

  if (2 * k <= m) {
    if (trace != nullptr) trace->fallback = true;
    word_lease counters(meter, 1);
    top_buffer<K> top(k, meter);
    for (std::size_t i = 0; i < n; ++i) top.offer(cursor.next());
    return top.nth(k);
  }

  // schedule seed, stage index, rank, stage end, stage target
  word_lease counters(meter, 5);
  word_lease window_words(meter, 3 * m);

  auto boundary = [&](unsigned i) { return stage_schedule::replay_boundary(n, levels, schedule_seed, i); };
  auto target = [&](unsigned i) { return stage_schedule::target_for(k, levels, boundary(i + 1), i); };

  unsigned start = 0;
  while (2 * target(start) <= m) ++start;  // terminates: T_L = k > m/2

  window<K> w(m);
  const long long center = static_cast<long long>(w.center_index());
  const std::size_t base_end = boundary(start + 1);
  for (std::size_t j = 0; j < base_end; ++j) w.base_offer(cursor.next());
  const std::size_t base_target = target(start);
  w.move(center - static_cast<long long>(base_target) - 1);
  std::size_t rank = base_target;
  if (trace != nullptr) {
    trace->start_stage = start;
    trace->stages.push_back(stage_record{start, 0, base_end, base_target, rank, rank, w.census()});
  }

  for (unsigned i = start + 1; i <= levels; ++i) {
    const std::size_t begin = boundary(i);
    const std::size_t end = boundary(i + 1);
    for (std::size_t j = begin; j < end; ++j) {
      const K& x = cursor.next();
      if (w.center().less_than(x)) ++rank;
      w.insert(x);
    }
    const std::size_t stage_target = target(i);
    const std::size_t before = rank;
    w.move(static_cast<long long>(rank) - static_cast<long long>(stage_target));
    rank = stage_target;
    if (trace != nullptr) trace->stages.push_back(stage_record{i, begin, end, stage_target, before, rank, w.census()});
  }

  if (!w.center().is_key()) {
    throw selection_failure("exact_select: center slot holds a sentinel (k=" + std::to_string(k) +
                            ", m=" + std::to_string(m) + ")");
  }
  return w.center().key;
}

template<stream_key K>
K exact_select(stream_cursor<K>& cursor, std::size_t n, std::size_t k, std::size_t m, random_source& rng) {
  memory_meter meter;
  return exact_select(cursor, n, k, m, rng, meter);
}

// ---------------------------------------------------------------------------
// Good-event diagnostics. The trace is computed with full access to the
// instance (oracle side); the checker only evaluates the four conditions.

struct good_event_stage {
  unsigned stage = 0;
  std::size_t prefix = 0;        // B_i
  std::size_t next_prefix = 0;   // B_{i+1}
  std::size_t target = 0;        // T_i
  std::size_t prev_target = 0;   // T_{i-1}
  /// Rank within s[1..B_{i+1}] of the T_{i-1}-th largest of s[1..B_i]
  /// (absent when T_{i-1} = 0).
  std::optional<std::size_t> carried_rank;
  /// Arrivals in s[B_i+1..B_{i+1}] strictly between the (T_{i-1}-m+1)-th and
  /// T_{i-1}-th largest of s[1..B_i]; only meaningful when T_{i-1} > m.
  std::size_t upper_band = 0;
  /// Arrivals strictly between the T_{i-1}-th and (T_{i-1}+m)-th largest;
  /// only meaningful when T_{i-1} + m <= B_i.
  std::size_t lower_band = 0;
};

struct good_event_trace {
  std::size_t m = 0;
  unsigned levels = 0;
  std::optional<unsigned> start_stage;
  std::size_t start_target = 0;
  std::vector<good_event_stage> stages;  // stages 1..L
};

struct good_event_violation {
  int condition = 0;
  unsigned stage = 0;
  friend bool operator==(const good_event_violation&, const good_event_violation&) = default;
};

template<stream_key K>
good_event_trace build_good_event_trace(const stream_instance<K>& inst, const stage_schedule& schedule, std::size_t m) {
  m = normalize_block_size(m);
  const std::vector<K> seq = inst.sequence();
  good_event_trace trace;
  trace.m = m;
  trace.levels = schedule.levels;
  trace.start_stage = schedule.start_stage(m);
  if (trace.start_stage) trace.start_target = schedule.targets[*trace.start_stage];

  std::vector<K> top;
  for (unsigned i = 1; i <= schedule.levels; ++i) {
    good_event_stage st;
    st.stage = i;
    st.prefix = schedule.boundaries[i];
    st.next_prefix = schedule.boundaries[i + 1];
    st.target = schedule.targets[i];
    st.prev_target = schedule.targets[i - 1];

    const std::size_t keep = std::min(st.prefix, st.prev_target + m);
    top.resize(keep);
    std::partial_sort_copy(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(st.prefix), top.begin(), top.end(),
                           std::greater<>());
    auto nth = [&](std::size_t r) -> const K& { return top[r - 1]; };

    if (st.prev_target >= 1) {
      const K& pivot = nth(st.prev_target);
      st.carried_rank = static_cast<std::size_t>(std::count_if(
          seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(st.next_prefix), [&](const K& t) { return !(t < pivot); }));
    }
    auto count_between = [&](const K& lo, const K& hi) {
      return static_cast<std::size_t>(std::count_if(seq.begin() + static_cast<std::ptrdiff_t>(st.prefix),
                                                    seq.begin() + static_cast<std::ptrdiff_t>(st.next_prefix),
                                                    [&](const K& t) { return lo < t && t < hi; }));
    };
    if (st.prev_target > m) st.upper_band = count_between(nth(st.prev_target), nth(st.prev_target - m + 1));
    if (st.prev_target >= 1 && st.prev_target + m <= st.prefix) {
      st.lower_band = count_between(nth(st.prev_target + m), nth(st.prev_target));
    }
    trace.stages.push_back(st);
  }
  return trace;
}

/**
 * Conditions under which exact selection provably succeeds:
 *   1. every stage with T_i >= m/2 carries the T_{i-1}-th element to a rank in
 *      [T_i - m/2, T_i + m/2];
 *   2. every stage i >= 2 with T_{i-1} > m sees >= m/2 arrivals in the upper band;
 *   3. every stage i >= 2 with T_{i-1} + m <= B_i sees >= m/2 arrivals in the lower band;
 *   4. T_{i0} <= 2m.
 */
inline std::vector<good_event_violation> check_good_event(const good_event_trace& trace) {
  std::vector<good_event_violation> out;
  const std::size_t m = trace.m;
  for (const auto& st : trace.stages) {
    if (2 * st.target >= m && st.carried_rank) {
      const std::size_t r2 = 2 * *st.carried_rank;
      if (r2 + m < 2 * st.target || r2 > 2 * st.target + m) out.push_back({1, st.stage});
    }
    if (st.stage >= 2) {
      if (st.prev_target > m && 2 * st.upper_band < m) out.push_back({2, st.stage});
      if (st.prev_target + m <= st.prefix && 2 * st.lower_band < m) out.push_back({3, st.stage});
    }
  }
  if (trace.start_stage && trace.start_target > 2 * m) out.push_back({4, *trace.start_stage});
  return out;
}

}  // namespace rostream

#endif  // ROSTREAM_QUANTILE_EXACT_HPP_
