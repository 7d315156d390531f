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

#ifndef ROSTREAM_EXTENDED_HPP_
#define ROSTREAM_EXTENDED_HPP_

#include <cassert>
#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>

namespace rostream {

/// Keys are compared and moved around, never combined arithmetically.
template<typename K>
concept stream_key = std::totally_ordered<K> && std::copyable<K>;

enum class bound_kind : std::uint8_t { bottom, finite, top };

/**
 * A key extended with the two order sentinels: bottom (below every key) and
 * top (above every key). Used for thresholds ("key-or-top") and for
 * estimator outputs ("key-or-bottom").
 */
template<stream_key K>
class extended {
 public:
  constexpr extended() = default;
  constexpr extended(const K& key) : kind_(bound_kind::finite), key_(key) {}  // NOLINT: implicit by intent

  static constexpr extended bottom() { return extended(bound_kind::bottom); }
  static constexpr extended top() { return extended(bound_kind::top); }

  constexpr bound_kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == bound_kind::finite; }
  constexpr bool is_bottom() const { return kind_ == bound_kind::bottom; }
  constexpr bool is_top() const { return kind_ == bound_kind::top; }

  constexpr const K& value() const {
    assert(is_finite());
    return key_;
  }

  friend constexpr bool operator==(const extended& a, const extended& b) {
    if (a.kind_ != b.kind_) return false;
    return !a.is_finite() || a.key_ == b.key_;
  }

  friend constexpr std::strong_ordering operator<=>(const extended& a, const extended& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (!a.is_finite()) return std::strong_ordering::equal;
    if (a.key_ < b.key_) return std::strong_ordering::less;
    if (b.key_ < a.key_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // Strict comparisons against a raw key; the hot paths of every estimator.
  constexpr bool above(const K& x) const {
    return kind_ == bound_kind::top || (kind_ == bound_kind::finite && x < key_);
  }
  constexpr bool below(const K& x) const {
    return kind_ == bound_kind::bottom || (kind_ == bound_kind::finite && key_ < x);
  }

 private:
  explicit constexpr extended(bound_kind kind) : kind_(kind), key_() {}

  bound_kind kind_ = bound_kind::bottom;
  K key_{};
};

template<stream_key K>
std::ostream& operator<<(std::ostream& os, const extended<K>& x) {
  switch (x.kind()) {
    case bound_kind::bottom: return os << "-inf";
    case bound_kind::top: return os << "+inf";
    default: return os << x.value();
  }
}

}  // namespace rostream

#endif  // ROSTREAM_EXTENDED_HPP_
