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

// Walks through the three estimators and the secretary reduction on one
// random-order stream of 20 000 distinct integers.

#include <cstdint>
#include <iostream>
#include <numeric>
#include <vector>

#include "rostream/rostream.hpp"

int main() {
  using namespace rostream;

  std::vector<std::uint64_t> values(20000);
  std::iota(values.begin(), values.end(), std::uint64_t{1});
  const auto inst = make_instance(std::move(values), 42);
  const std::size_t n = inst.size();
  const std::size_t k = 256;

  random_source rng(7);

  {
    stream_cursor<std::uint64_t> cursor(inst);
    memory_meter meter;
    const auto x = estimate_quantile(cursor, n, k, approx_config::for_target(k), rng, meter);
    std::cout << "approx:  rank " << oracle::true_rank(inst.values(), x.value()) << ", peak words " << meter.peak()
              << '\n';
  }
  {
    stream_cursor<std::uint64_t> cursor(inst);
    memory_meter meter;
    const auto x = warmup_select(cursor, n, k, 16, rng, meter);
    std::cout << "warm-up: rank " << oracle::true_rank(inst.values(), x.value()) << ", peak words " << meter.peak()
              << '\n';
  }
  {
    stream_cursor<std::uint64_t> cursor(inst);
    memory_meter meter;
    try {
      const auto x = exact_select(cursor, n, k, 64, rng, meter);
      std::cout << "exact:   rank " << oracle::true_rank(inst.values(), x) << ", peak words " << meter.peak() << '\n';
    } catch (const selection_failure& e) {
      std::cout << "exact:   " << e.what() << '\n';
    }
  }
  {
    stream_cursor<std::uint64_t> cursor(inst);
    memory_meter meter;
    const auto log = choose_top_k(cursor, n, k, oracle_estimator<std::uint64_t>(), rng, meter);
    std::cout << "secretary: accepted " << log.size() << " of " << k << ", ratio " << competitive_ratio(log, inst, k)
              << ", peak words " << meter.peak() << '\n';
  }
  return 0;
}
