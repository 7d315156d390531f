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

#ifndef ROSTREAM_RANDOM_HPP_
#define ROSTREAM_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace rostream {

namespace detail {

constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/**
 * Counter-based generator (SplitMix64). The i-th output is a pure function
 * of (seed, i), and derive() produces an independent substream as a pure
 * function of (seed, label). Satisfies UniformRandomBitGenerator.
 */
class random_source {
 public:
  using result_type = std::uint64_t;

  explicit random_source(std::uint64_t seed) : seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    ++counter_;
    return detail::mix64(seed_ + counter_ * detail::golden_gamma);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return counter_; }

  random_source derive(std::uint64_t label) const {
    return random_source(detail::mix64(seed_ ^ detail::mix64(label + detail::golden_gamma)));
  }
  random_source derive(std::string_view label) const { return derive(detail::hash_label(label)); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Unbiased integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) {
    // Lemire's multiply-and-reject.
    std::uint64_t x = (*this)();
    __uint128_t prod = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = (*this)();
        prod = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

namespace detail {

inline std::uint64_t binomial_bernoulli_sum(std::uint64_t trials, double p, random_source& rng) {
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    if (rng.uniform01() < p) ++count;
  }
  return count;
}

// Inversion with the outcomes visited in the order mode, mode-1, mode+1,
// mode-2, ... Exact up to floating point; expected cost O(sqrt(n p (1-p))).
// If roundoff leaves mass unaccounted for, the draw is restarted.
inline std::uint64_t binomial_mode_inversion(std::uint64_t trials, double p, random_source& rng) {
  const double n = static_cast<double>(trials);
  const double q = 1.0 - p;
  const double odds = p / q;
  auto mode = static_cast<std::uint64_t>(std::floor((n + 1.0) * p));
  if (mode > trials) mode = trials;
  const double md = static_cast<double>(mode);
  const double log_pmf_mode = std::lgamma(n + 1.0) - std::lgamma(md + 1.0) - std::lgamma(n - md + 1.0) +
                              md * std::log(p) + (n - md) * std::log1p(-p);
  const double pmf_mode = std::exp(log_pmf_mode);

  for (;;) {
    double u = rng.uniform01() - pmf_mode;
    if (u < 0.0) return mode;

    std::uint64_t lo = mode;
    std::uint64_t hi = mode;
    double pmf_lo = pmf_mode;
    double pmf_hi = pmf_mode;
    bool lo_open = mode > 0;
    bool hi_open = mode < trials;
    while (lo_open || hi_open) {
      if (lo_open) {
        // pmf(x-1) = pmf(x) * x / (n-x+1) / odds
        pmf_lo *= static_cast<double>(lo) / (n - static_cast<double>(lo) + 1.0) / odds;
        --lo;
        u -= pmf_lo;
        if (u < 0.0) return lo;
        lo_open = lo > 0 && pmf_lo > 0.0;
      }
      if (hi_open) {
        // pmf(x+1) = pmf(x) * (n-x) / (x+1) * odds
        pmf_hi *= (n - static_cast<double>(hi)) / (static_cast<double>(hi) + 1.0) * odds;
        ++hi;
        u -= pmf_hi;
        if (u < 0.0) return hi;
        hi_open = hi < trials && pmf_hi > 0.0;
      }
    }
  }
}

}  // namespace detail

/**
 * Exact Binomial(trials, p) draw.
 *
 * Up to 64 trials the sample is a literal sum of Bernoulli draws; above that,
 * mode-centred inversion is used (p > 1/2 is handled by symmetry).
 */
inline std::uint64_t sample_binomial(std::uint64_t trials, double p, random_source& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw domain_error("sample_binomial: probability must lie in [0, 1], got " + std::to_string(p));
  }
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  if (trials <= 64) return detail::binomial_bernoulli_sum(trials, p, rng);
  if (p > 0.5) return trials - detail::binomial_mode_inversion(trials, 1.0 - p, rng);
  return detail::binomial_mode_inversion(trials, p, rng);
}

}  // namespace rostream

#endif  // ROSTREAM_RANDOM_HPP_
