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

#ifndef ROSTREAM_QUANTILE_WARMUP_HPP_
#define ROSTREAM_QUANTILE_WARMUP_HPP_

#include <cstddef>
#include <string>

#include "errors.hpp"
#include "extended.hpp"
#include "memory_meter.hpp"
#include "random.hpp"
#include "stream.hpp"
#include "top_buffer.hpp"

namespace rostream {

/**
 * Baseline estimator: subsample at rate m/k and return the m-th largest
 * subsampled element.
 *
 * The subsample is the stream prefix of length B ~ Binomial(n, m/k), which in
 * a random-order stream is distributed exactly like independent inclusion at
 * rate m/k. With m >= k the exact k-th largest is returned instead. If fewer
 * than m elements were sampled the smallest sampled one is returned, and
 * bottom if none were. Reads exactly n elements.
 */
template<stream_key K>
extended<K> warmup_select(stream_cursor<K>& cursor, std::size_t n, std::size_t k, std::size_t m, random_source& rng,
                          memory_meter& meter) {
  if (k < 1 || k > n) {
    throw invalid_target("warmup_select: k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  if (m < 1) throw std::invalid_argument("warmup_select: memory budget m must be >= 1");

  if (m >= k) {
    word_lease counters(meter, 1);  // elements left to read
    top_buffer<K> top(k, meter);
    for (std::size_t i = 0; i < n; ++i) top.offer(cursor.next());
    return top.nth(k);
  }

  word_lease counters(meter, 2);  // B, elements left to read
  const auto prefix = static_cast<std::size_t>(
      sample_binomial(n, static_cast<double>(m) / static_cast<double>(k), rng));
  top_buffer<K> top(m, meter);
  for (std::size_t i = 0; i < prefix; ++i) top.offer(cursor.next());
  cursor.skip(n - prefix);
  if (top.empty()) return extended<K>::bottom();
  return top.smallest();  // the m-th largest when full
}

}  // namespace rostream

#endif  // ROSTREAM_QUANTILE_WARMUP_HPP_
