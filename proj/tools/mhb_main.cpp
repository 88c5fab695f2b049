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

// Batch runner. Exit codes: 0 all rows pass, 1 at least one checked row
// failed, 2 for configuration or usage errors.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mhbounds/errors.hpp"
#include "mhbounds/extremal.hpp"
#include "mhbounds/report.hpp"
#include "mhbounds/scenario.hpp"

namespace {

struct Summary {
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};

Summary summarize(const std::vector<mhb::ReportRow>& rows) {
  Summary s;
  for (const auto& row : rows) {
    if (row.method == "skipped") {
      ++s.skipped;
    } else if (row.pass) {
      ++s.passed;
    } else {
      ++s.failed;
    }
  }
  return s;
}

int finish(const std::vector<mhb::ReportRow>& rows, const std::string& out_base,
           std::uint64_t config_hash) {
  const auto dir = mhb::make_run_dir(out_base, config_hash);
  mhb::write_reports(dir, rows, config_hash);
  const Summary s = summarize(rows);
  std::cout << "wrote " << (dir / "report.csv").string() << " (" << rows.size()
            << " rows)\n";
  std::cout << s.passed << " passed, " << s.failed << " failed, " << s.skipped
            << " skipped\n";
  if (s.failed == 0) return 0;
  for (const auto& row : rows) {
    if (!row.pass && row.method != "skipped") {
      std::cout << "FAIL " << row.scenario_id << " " << row.theorem_id
                << " r=" << mhb::format_double(row.r)
                << " margin=" << mhb::format_double(row.margin);
      if (!row.note.empty()) std::cout << " (" << row.note << ")";
      std::cout << "\n";
    }
  }
  return 1;
}

// Parses "a:b:step" (inclusive endpoints, positive step) or a single value.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw mhb::ConfigError("bad grid element '" + item + "'");
    parts.push_back(v);
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || parts[2] <= 0.0 || parts[1] < parts[0]) {
    throw mhb::ConfigError("expected --r-grid a:b:step with step > 0 and b >= a");
  }
  std::vector<double> grid;
  for (double r = parts[0]; r <= parts[1] + 1e-12 * (1.0 + std::abs(parts[1]));
       r += parts[2]) {
    grid.push_back(r);
  }
  return grid;
}

int cmd_run(const std::string& config_path, const std::string& out_base,
            int workers, double tolerance, bool exact) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open config '" << config_path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const mhb::RunConfig config = mhb::parse_config(text);
  mhb::RunOptions options;
  options.workers = workers;
  if (tolerance > 0.0) options.tolerance = tolerance;
  options.exact = exact;

  const auto rows = mhb::run_config(config, options);
  return finish(rows, out_base, mhb::fnv1a(text));
}

int cmd_fixtures(const std::string& out_base) {
  const auto rows = mhb::emit_fixture_suite();
  return finish(rows, out_base, mhb::fnv1a("fixtures"));
}

int cmd_extremal(const std::string& grid_text, const std::string& out_base,
                 bool brute) {
  const std::vector<double> grid = parse_grid(grid_text);
  std::vector<mhb::ReportRow> rows;
  for (double r : grid) {
    mhb::ReportRow row;
    row.scenario_id = "extremal";
    row.theorem_id = "extremal-s";
    row.r = r;
    try {
      const mhb::ExtremalResult res = mhb::s_of_r(r);
      row.lhs = res.value;
      row.rhs = res.value;
      row.pass = true;
      row.method = "scan";
      row.note = "argmax k = " + std::to_string(res.argmax_k) +
                 ", y = " + std::to_string(res.argmax_y) +
                 "; ln s = " + mhb::format_double(res.log_value);
      rows.push_back(row);
      if (!brute) continue;
      const mhb::Thresholds th = mhb::thresholds(r);
      long k_max = th.k_edge + 5;
      if (th.k_peak) k_max = std::max(k_max, *th.k_peak + 5);
      if (th.k_tail) k_max = std::max(k_max, *th.k_tail + 5);
      if (k_max > 20000) {
        mhb::ReportRow skip = row;
        skip.theorem_id = "extremal-vs-brute";
        skip.method = "skipped";
        skip.pass = true;
        skip.note = "not-applicable: brute-force window k <= " + std::to_string(k_max) +
                    " is too wide";
        rows.push_back(skip);
        continue;
      }
      const mhb::BruteResult bf = mhb::brute_force_s(r, k_max);
      mhb::ReportRow cmp;
      cmp.scenario_id = "extremal";
      cmp.theorem_id = "extremal-vs-brute";
      cmp.r = r;
      cmp.lhs = std::abs(res.value - bf.value);
      cmp.rhs = 1e-12 * (1.0 + res.value);
      cmp.margin = cmp.rhs - cmp.lhs;
      cmp.pass = cmp.lhs <= cmp.rhs && res.argmax_k == bf.argmax_k &&
                 res.argmax_y == bf.argmax_y;
      cmp.method = "brute-force";
      cmp.note = "scan vs full scan up to k = " + std::to_string(k_max);
      rows.push_back(cmp);
    } catch (const mhb::Error& e) {
      row.pass = true;
      row.method = "skipped";
      row.note = std::string("not-applicable: ") + e.what();
      rows.push_back(row);
    }
  }
  return finish(rows, out_base, mhb::fnv1a("extremal " + grid_text));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stationary random-walk Metropolis autocorrelation checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_base = "runs";
  int workers = 1;
  double tolerance = 0.0;
  bool exact = false;
  auto* run = app.add_subcommand("run", "execute a JSON scenario config");
  run->add_option("config", config_path, "path to the config file")->required();
  run->add_option("--out", out_base, "base directory for run outputs");
  run->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--tolerance", tolerance, "global quadrature tolerance override");
  run->add_flag("--exact", exact, "prefer exact arithmetic where available");

  std::string fixtures_out = "runs";
  auto* fixtures = app.add_subcommand("fixtures", "run the frozen regression fixtures");
  fixtures->add_option("--out", fixtures_out, "base directory for run outputs");

  std::string grid_text;
  std::string extremal_out = "runs";
  bool brute = false;
  auto* extremal = app.add_subcommand("extremal", "tabulate the extremal constant s(r)");
  extremal->add_option("--r-grid", grid_text, "grid a:b:step or a single r")->required();
  extremal->add_option("--out", extremal_out, "base directory for run outputs");
  extremal->add_flag("--brute", brute, "cross-check against the full quadratic scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_base, workers, tolerance, exact);
    if (fixtures->parsed()) return cmd_fixtures(fixtures_out);
    if (extremal->parsed()) return cmd_extremal(grid_text, extremal_out, brute);
  } catch (const mhb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
