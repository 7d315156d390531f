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

#ifndef ROSTREAM_MEMORY_METER_HPP_
#define ROSTREAM_MEMORY_METER_HPP_

#include <algorithm>
#include <cassert>
#include <cstddef>

namespace rostream {

/**
 * Counts words held by an algorithm: one word per stored key and one per
 * live integer counter. A meter may have a parent; words acquired through a
 * child are also charged to the parent, so the child's peak isolates a
 * sub-computation while the parent sees the total.
 */
class memory_meter {
 public:
  memory_meter() = default;
  explicit memory_meter(memory_meter* parent) : parent_(parent) {}

  memory_meter(const memory_meter&) = delete;
  memory_meter& operator=(const memory_meter&) = delete;

  void acquire(std::size_t words) {
    current_ += words;
    peak_ = std::max(peak_, current_);
    if (parent_ != nullptr) parent_->acquire(words);
  }

  void release(std::size_t words) {
    assert(words <= current_);
    current_ -= words;
    if (parent_ != nullptr) parent_->release(words);
  }

  std::size_t current() const { return current_; }
  std::size_t peak() const { return peak_; }

 private:
  memory_meter* parent_ = nullptr;
  std::size_t current_ = 0;
  std::size_t peak_ = 0;
};

/// RAII charge of a (resizable) number of words against a meter.
class word_lease {
 public:
  word_lease(memory_meter& meter, std::size_t words) : meter_(&meter), words_(words) { meter_->acquire(words_); }
  ~word_lease() { meter_->release(words_); }

  word_lease(const word_lease&) = delete;
  word_lease& operator=(const word_lease&) = delete;

  void resize(std::size_t words) {
    if (words > words_) {
      meter_->acquire(words - words_);
    } else {
      meter_->release(words_ - words);
    }
    words_ = words;
  }

  std::size_t words() const { return words_; }

 private:
  memory_meter* meter_;
  std::size_t words_;
};

}  // namespace rostream

#endif  // ROSTREAM_MEMORY_METER_HPP_
