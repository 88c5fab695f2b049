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

#ifndef MHBOUNDS_REPORT_HPP_
#define MHBOUNDS_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mhbounds/bound_report.hpp"

namespace mhb {

// One line of a run report. Bound rows carry a checked inequality; value
// rows (tables, exact fixtures) put the value in both lhs and rhs so the
// schema stays uniform. The CSV column set is fixed; `note` appears only in
// the JSON mirror.
struct ReportRow {
  std::string scenario_id;
  std::string theorem_id;
  double r = 0.0;
  int lag = 1;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool strict_expected = false;
  bool pass = false;
  std::string method;
  double error_bound = 0.0;
  std::optional<std::uint64_t> seed;
  std::string note;
};

ReportRow to_report_row(const std::string& scenario_id, const BoundReport& b);

// Shortest round-trip decimal rendering (via std::to_chars), so reruns are
// byte-identical and values parse back exactly.
std::string format_double(double v);

// FNV-1a 64-bit hash; the low 8 hex digits name the run directory.
std::uint64_t fnv1a(std::string_view text);

inline constexpr char kCsvHeader[] =
    "scenario_id,theorem_id,r,lag,lhs,rhs,margin,strict_expected,pass,method,"
    "error_bound,seed";

std::string to_csv_line(const ReportRow& row);

// Writes report.csv (fixed header) and report.json (rows with notes, plus
// metadata: schema version, config hash, generator name). Contents are a
// pure function of the rows and the hash, never of the clock.
void write_reports(const std::filesystem::path& dir,
                   const std::vector<ReportRow>& rows,
                   std::uint64_t config_hash);

// Creates <base>/<UTC timestamp>_<hash8>/ (suffixing -2, -3, ... on
// collision) and returns the path.
std::filesystem::path make_run_dir(const std::filesystem::path& base,
                                   std::uint64_t config_hash);

}  // namespace mhb

#endif  // MHBOUNDS_REPORT_HPP_
