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

// Experiment runner: Monte Carlo trials of the estimators and the secretary
// reduction, per-trial CSV plus a key=value summary on stdout.
//
//   rostream_cli --mode quantile-exact --n 20000 --k 64,256 --trials 500 --out exact.csv
//   rostream_cli --config run.ini --trials 10

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rostream/harness.hpp"

namespace h = rostream::harness;

int main(int argc, char** argv) {
  CLI::App app{"Random-order stream quantile and secretary experiments"};

  std::string mode = "quantile-approx";
  std::string family = "uniform-distinct";
  std::string estimator = "oracle";
  std::string out;
  std::vector<std::size_t> ks{100};
  std::size_t m = 0;
  h::experiment_config cfg;

  app.set_config("--config", "", "flat key=value file; command-line flags override it");
  app.add_option("--mode", mode, "quantile-approx | quantile-exact | quantile-warmup | secretary")->capture_default_str();
  app.add_option("--n", cfg.n, "stream length")->capture_default_str();
  app.add_option("--k", ks, "target rank, or a comma-separated sweep")->delimiter(',')->capture_default_str();
  app.add_option("--m", m, "memory parameter (default depends on mode and k)");
  app.add_option("--c0", cfg.c0, "threshold window constant")->capture_default_str();
  app.add_option("--trials", cfg.trials, "trials per k")->capture_default_str();
  app.add_option("--seed", cfg.seed, "base seed; trial t uses seed xor t")->capture_default_str();
  app.add_option("--instance", family, "uniform-distinct | zero-one-eps | adversarial-permuted-values")
      ->capture_default_str();
  app.add_option("--estimator", estimator, "secretary estimator: oracle | approx | warmup")->capture_default_str();
  app.add_option("--eps", cfg.eps, "tie-breaking gap for zero-one-eps")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
  app.add_option("--out", out, "per-trial CSV path (stdout summary only when omitted)");
  app.add_flag("--trace", cfg.trace, "quantile-exact: write good-event checks and stage lines to <out>.trace");

  try {
    app.parse(argc, argv);
    cfg.mode = h::parse_mode(mode);
    cfg.family = h::parse_family(family);
    cfg.estimator = h::parse_estimator(estimator);
    cfg.ks = ks;
    if (app.count("--m") > 0) cfg.m = m;
    cfg.validate();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const rostream::usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  if (cfg.mode == h::run_mode::quantile_exact && cfg.m && *cfg.m % 2 != 0) {
    std::cerr << "warning: quantile-exact needs an even m; using m=" << *cfg.m + 1 << '\n';
  }

  try {
    const auto result = h::run_experiment(cfg);
    if (!out.empty()) {
      std::ofstream csv(out);
      if (!csv) throw std::runtime_error("cannot open '" + out + "' for writing");
      h::write_csv(csv, cfg.mode, result.records);
      if (!csv) throw std::runtime_error("write to '" + out + "' failed");
      if (cfg.trace && cfg.mode == h::run_mode::quantile_exact) {
        const std::string trace_path = out + ".trace";
        std::ofstream trace(trace_path);
        if (!trace) throw std::runtime_error("cannot open '" + trace_path + "' for writing");
        h::write_trace(trace, result.records);
      }
    }
    h::write_summary(std::cout, cfg, result.summaries);
  } catch (const rostream::usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
