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

#ifndef ROSTREAM_TOP_BUFFER_HPP_
#define ROSTREAM_TOP_BUFFER_HPP_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "extended.hpp"
#include "memory_meter.hpp"

namespace rostream {

/**
 * Keeps the `capacity` largest keys offered so far, sorted descending.
 * Binary-search insertion; one metered word per stored key.
 */
template<stream_key K>
class top_buffer {
 public:
  top_buffer(std::size_t capacity, memory_meter& meter) : capacity_(capacity), lease_(meter, 0) {
    keys_.reserve(capacity);
  }

  void offer(const K& x) {
    if (capacity_ == 0) return;
    if (keys_.size() == capacity_ && !(keys_.back() < x)) return;
    auto it = std::upper_bound(keys_.begin(), keys_.end(), x, std::greater<>());
    if (keys_.size() == capacity_) keys_.pop_back();
    keys_.insert(it, x);
    lease_.resize(keys_.size());
  }

  std::size_t size() const { return keys_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return keys_.empty(); }

  /// i-th largest retained key, 1-based.
  const K& nth(std::size_t i) const { return keys_[i - 1]; }
  const K& largest() const { return keys_.front(); }
  const K& smallest() const { return keys_.back(); }
  const std::vector<K>& keys() const { return keys_; }

 private:
  std::size_t capacity_;
  std::vector<K> keys_;
  word_lease lease_;
};

}  // namespace rostream

#endif  // ROSTREAM_TOP_BUFFER_HPP_
