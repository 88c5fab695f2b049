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

#include "mhbounds/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mhbounds/errors.hpp"

namespace mhb {

using Json = nlohmann::ordered_json;

ReportRow to_report_row(const std::string& scenario_id, const BoundReport& b) {
  ReportRow row;
  row.scenario_id = scenario_id;
  row.theorem_id = b.theorem_id;
  row.r = b.r;
  row.lag = b.lag;
  row.lhs = b.lhs;
  row.rhs = b.rhs;
  row.margin = b.margin;
  row.strict_expected = b.strict_expected;
  row.pass = b.pass;
  row.method = b.method;
  row.error_bound = b.error_bound;
  row.note = b.note;
  return row;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string to_csv_line(const ReportRow& row) {
  std::ostringstream out;
  out << row.scenario_id << ',' << row.theorem_id << ',' << format_double(row.r)
      << ',' << row.lag << ',' << format_double(row.lhs) << ','
      << format_double(row.rhs) << ',' << format_double(row.margin) << ','
      << (row.strict_expected ? "true" : "false") << ','
      << (row.pass ? "true" : "false") << ',' << row.method << ','
      << format_double(row.error_bound) << ',';
  if (row.seed) out << *row.seed;
  return out.str();
}

namespace {

std::string hash8(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(8, '0');
  for (int i = 7; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

}  // namespace

void write_reports(const std::filesystem::path& dir,
                   const std::vector<ReportRow>& rows,
                   std::uint64_t config_hash) {
  {
    std::ofstream csv(dir / "report.csv", std::ios::binary);
    if (!csv) throw ConfigError("cannot open " + (dir / "report.csv").string());
    csv << kCsvHeader << '\n';
    for (const auto& row : rows) csv << to_csv_line(row) << '\n';
  }
  Json doc;
  doc["schema"] = 1;
  doc["generator"] = "mhb";
  doc["config_hash"] = hash8(config_hash);
  doc["rows"] = Json::array();
  for (const auto& row : rows) {
    Json j;
    j["scenario_id"] = row.scenario_id;
    j["theorem_id"] = row.theorem_id;
    j["r"] = row.r;
    j["lag"] = row.lag;
    j["lhs"] = row.lhs;
    j["rhs"] = row.rhs;
    j["margin"] = row.margin;
    j["strict_expected"] = row.strict_expected;
    j["pass"] = row.pass;
    j["method"] = row.method;
    j["error_bound"] = row.error_bound;
    if (row.seed) j["seed"] = *row.seed;
    if (!row.note.empty()) j["note"] = row.note;
    doc["rows"].push_back(std::move(j));
  }
  std::ofstream json(dir / "report.json", std::ios::binary);
  if (!json) throw ConfigError("cannot open " + (dir / "report.json").string());
  json << doc.dump(2) << '\n';
}

std::filesystem::path make_run_dir(const std::filesystem::path& base,
                                   std::uint64_t config_hash) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm);

  std::filesystem::create_directories(base);
  const std::string name = std::string(stamp) + "_" + hash8(config_hash);
  std::filesystem::path dir = base / name;
  for (int i = 2; std::filesystem::exists(dir); ++i) {
    dir = base / (name + "-" + std::to_string(i));
  }
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace mhb
