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

#ifndef ROSTREAM_STREAM_HPP_
#define ROSTREAM_STREAM_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "extended.hpp"
#include "random.hpp"

namespace rostream {

/**
 * A value set together with its arrival order. Position j (0-based) of the
 * stream carries values()[arrival()[j]]. Immutable after construction.
 */
template<stream_key K>
class stream_instance {
 public:
  stream_instance(std::vector<K> values, std::vector<std::size_t> arrival)
      : values_(std::move(values)), arrival_(std::move(arrival)) {
    if (values_.empty()) throw std::invalid_argument("stream_instance: empty value set");
    check_distinct(values_);
    if (arrival_.size() != values_.size()) {
      throw std::invalid_argument("stream_instance: arrival length differs from value count");
    }
    std::vector<bool> hit(values_.size(), false);
    for (std::size_t idx : arrival_) {
      if (idx >= values_.size() || hit[idx]) {
        throw std::invalid_argument("stream_instance: arrival is not a permutation");
      }
      hit[idx] = true;
    }
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<K>& values() const { return values_; }
  const std::vector<std::size_t>& arrival() const { return arrival_; }

  /// Element at 1-based stream position.
  const K& at(std::size_t position) const {
    if (position < 1 || position > size()) {
      throw index_error("stream position " + std::to_string(position) + " outside [1, " +
                        std::to_string(size()) + "]");
    }
    return values_[arrival_[position - 1]];
  }

  /// The stream in arrival order.
  std::vector<K> sequence() const {
    std::vector<K> out;
    out.reserve(size());
    for (std::size_t idx : arrival_) out.push_back(values_[idx]);
    return out;
  }

  static void check_distinct(const std::vector<K>& values) {
    std::vector<K> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw distinctness_violation("stream values must be pairwise distinct");
    }
  }

 private:
  std::vector<K> values_;
  std::vector<std::size_t> arrival_;
};

/// Uniformly random arrival order (Fisher-Yates driven by the seed).
template<stream_key K>
stream_instance<K> make_instance(std::vector<K> values, std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("make_instance: empty value set");
  stream_instance<K>::check_distinct(values);
  std::vector<std::size_t> arrival(values.size());
  std::iota(arrival.begin(), arrival.end(), std::size_t{0});
  random_source rng(seed);
  for (std::size_t i = arrival.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(i + 1));
    std::swap(arrival[i], arrival[j]);
  }
  return stream_instance<K>(std::move(values), std::move(arrival));
}

/// |{t in s[i1..i2] : cap > t >= x}| over 1-based inclusive positions.
template<stream_key K>
std::size_t rank_between(const stream_instance<K>& inst, std::size_t i1, std::size_t i2, const K& x,
                         const extended<K>& cap = extended<K>::top()) {
  if (i1 < 1 || i1 > i2 || i2 > inst.size()) {
    throw index_error("rank_between: need 1 <= i1 <= i2 <= n, got i1=" + std::to_string(i1) +
                      " i2=" + std::to_string(i2) + " n=" + std::to_string(inst.size()));
  }
  std::size_t count = 0;
  for (std::size_t pos = i1; pos <= i2; ++pos) {
    const K& t = inst.at(pos);
    if (!(t < x) && cap.above(t)) ++count;
  }
  return count;
}

/// Same arrival order, each value mapped through a strictly increasing f.
template<stream_key K, typename F>
auto monotone_relabel(const stream_instance<K>& inst, F&& f) {
  using out_key = std::decay_t<std::invoke_result_t<F&, const K&>>;
  std::vector<out_key> mapped;
  mapped.reserve(inst.size());
  for (const K& v : inst.values()) mapped.push_back(f(v));

  stream_instance<out_key>::check_distinct(mapped);
  std::vector<std::size_t> order(inst.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return inst.values()[a] < inst.values()[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (!(mapped[order[i - 1]] < mapped[order[i]])) {
      throw std::invalid_argument("monotone_relabel: map is not strictly increasing on the values");
    }
  }
  return stream_instance<out_key>(std::move(mapped), inst.arrival());
}

/**
 * Single-pass read handle. Every element is emitted at most once, in arrival
 * order. An optional observer sees each element as it is emitted; this is how
 * an online consumer shares a pass with an estimator reading the same cursor.
 */
template<stream_key K>
class stream_cursor {
 public:
  using observer = std::function<void(std::size_t position, const K& value)>;

  explicit stream_cursor(const stream_instance<K>& inst) : inst_(&inst) {}

  /// Number of elements already emitted (= 1-based position of the last one).
  std::size_t position() const { return next_; }
  std::size_t remaining() const { return inst_->size() - next_; }

  const K& next() {
    if (next_ >= inst_->size()) {
      throw contract_violation("stream_cursor: read past end of stream (n=" + std::to_string(inst_->size()) + ")");
    }
    ++next_;
    const K& value = inst_->at(next_);
    if (observer_) observer_(next_, value);
    return value;
  }

  /// Read and discard count elements (observers still see them).
  void skip(std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) next();
  }

  void set_observer(observer obs) { observer_ = std::move(obs); }
  void clear_observer() { observer_ = nullptr; }

 private:
  const stream_instance<K>* inst_;
  std::size_t next_ = 0;
  observer observer_;
};

/// Text format: "n" on the first line, then one "value arrival_position" line
/// per value (0-based position at which that value is emitted).
template<stream_key K>
void write_instance(std::ostream& os, const stream_instance<K>& inst) {
  std::vector<std::size_t> position_of(inst.size());
  for (std::size_t j = 0; j < inst.size(); ++j) position_of[inst.arrival()[j]] = j;
  const auto old_precision = os.precision();
  if constexpr (std::is_floating_point_v<K>) os.precision(std::numeric_limits<K>::max_digits10);
  os << inst.size() << '\n';
  for (std::size_t i = 0; i < inst.size(); ++i) os << inst.values()[i] << ' ' << position_of[i] << '\n';
  os.precision(old_precision);
}

template<stream_key K>
stream_instance<K> read_instance(std::istream& is) {
  std::size_t n = 0;
  if (!(is >> n) || n == 0) throw std::runtime_error("read_instance: missing or zero element count");
  std::vector<K> values(n);
  std::vector<std::size_t> arrival(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pos = 0;
    if (!(is >> values[i] >> pos)) {
      throw std::runtime_error("read_instance: truncated record " + std::to_string(i));
    }
    if (pos >= n || arrival[pos] != n) throw std::runtime_error("read_instance: arrival positions do not form a permutation");
    arrival[pos] = i;
  }
  return stream_instance<K>(std::move(values), std::move(arrival));
}

}  // namespace rostream

#endif  // ROSTREAM_STREAM_HPP_
