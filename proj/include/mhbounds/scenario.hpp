// Copyright 2026 The mhbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MHBOUNDS_SCENARIO_HPP_
#define MHBOUNDS_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mhbounds/distributions.hpp"
#include "mhbounds/report.hpp"

namespace mhb {

// One batch-runner work item, parsed from the JSON config. Modes:
//   simulate       seeded path simulation with formula cross-checks
//   exact          rational kernel statistics and even-lag checks (lattices)
//   formulas       increment-moment formulas and their equivalences
//   verify-bounds  every applicable inequality as one report row each
//   tv-check       shift overlap values and the shift moment bounds
//   extremal-table s(r) values with sandwich checks
//   rho-normal     the normal-target reference curve and its comparators
struct Scenario {
  std::string id;
  std::string mode;
  std::optional<Target> target;
  std::optional<Proposal> proposal;
  std::vector<double> r_values;
  std::vector<int> lags;
  std::vector<Vector> c_vectors;  // directions; shift vectors for tv-check
  std::size_t n_samples = 0;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

struct RunConfig {
  std::vector<Scenario> scenarios;
};

// Parses and validates a config document. Unknown keys, missing required
// fields, malformed values, and unknown modes all throw ConfigError naming
// the offending field path. Exact (rational) values must be JSON strings or
// integers; a bare float in a rational position is rejected.
RunConfig parse_config(const std::string& json_text);

struct RunOptions {
  int workers = 1;
  std::optional<double> tolerance;  // global quadrature tolerance override
  bool exact = false;               // prefer exact arithmetic where available
};

// Executes one scenario; never throws, a failure becomes a single
// theorem_id = "scenario-error" row with pass = false.
std::vector<ReportRow> run_scenario(const Scenario& scenario,
                                    const RunOptions& options);

// Executes all scenarios (in parallel up to options.workers) and returns the
// rows in config order regardless of scheduling.
std::vector<ReportRow> run_config(const RunConfig& config,
                                  const RunOptions& options);

// The named regression fixtures with exactly reproducible values (equality
// chains, the swap chain, overlap closed forms, sequence-bound equality and
// counterexample probes, extremal constants). Every fixture that is rational
// is checked in exact arithmetic.
std::vector<ReportRow> emit_fixture_suite();

}  // namespace mhb

#endif  // MHBOUNDS_SCENARIO_HPP_
