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

#ifndef ROSTREAM_ORACLE_HPP_
#define ROSTREAM_ORACLE_HPP_

// Ground truth by brute force. Not memory-bounded and never metered.

#include <algorithm>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "extended.hpp"

namespace rostream::oracle {

template<stream_key K>
K exact_kth(std::span<const K> values, std::size_t k) {
  if (k < 1 || k > values.size()) {
    throw invalid_target("exact_kth: k=" + std::to_string(k) + " outside [1, " + std::to_string(values.size()) + "]");
  }
  std::vector<K> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return sorted[k - 1];
}

template<stream_key K>
K exact_kth(const std::vector<K>& values, std::size_t k) {
  return exact_kth(std::span<const K>(values), k);
}

/// |{t in values : a > t >= x}|; x must be one of the values.
template<stream_key K>
std::size_t true_rank(std::span<const K> values, const K& x, const extended<K>& a = extended<K>::top()) {
  if (std::find(values.begin(), values.end(), x) == values.end()) throw not_found("true_rank: key not in value set");
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](const K& t) { return !(t < x) && a.above(t); }));
}

template<stream_key K>
std::size_t true_rank(const std::vector<K>& values, const K& x, const extended<K>& a = extended<K>::top()) {
  return true_rank(std::span<const K>(values), x, a);
}

/// Sum of the k largest values, accumulated in double.
template<stream_key K>
double opt_sum(std::span<const K> values, std::size_t k) {
  if (k < 1 || k > values.size()) throw invalid_target("opt_sum: k outside [1, n]");
  std::vector<K> sorted(values.begin(), values.end());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += static_cast<double>(sorted[i]);
  return sum;
}

template<stream_key K>
double opt_sum(const std::vector<K>& values, std::size_t k) {
  return opt_sum(std::span<const K>(values), k);
}

}  // namespace rostream::oracle

#endif  // ROSTREAM_ORACLE_HPP_
