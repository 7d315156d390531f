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

#ifndef ROSTREAM_ERRORS_HPP_
#define ROSTREAM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rostream {

// Input values were expected to be pairwise distinct.
class distinctness_violation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Target rank outside [1, n] (or k = 0 where a positive count is required).
class invalid_target : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numeric argument outside its mathematical domain (probability, epsilon, sign).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// 1-based stream position outside the instance.
class index_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Queried key is not part of the value set.
class not_found : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A streaming algorithm tried to read past the end of its cursor.
// Always a plumbing bug, never a domain condition.
class contract_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Exact selection ended with a sentinel in the center slot.
class selection_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration or empty input to a summary.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rostream

#endif  // ROSTREAM_ERRORS_HPP_
