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

#include "mhbounds/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>
#include <utility>

#include <json.hpp>

#include "mhbounds/bounds.hpp"
#include "mhbounds/chain.hpp"
#include "mhbounds/errors.hpp"
#include "mhbounds/exact_oracle.hpp"
#include "mhbounds/extremal.hpp"
#include "mhbounds/mh_core.hpp"
#include "mhbounds/moment_formulas.hpp"
#include "mhbounds/quadrature.hpp"
#include "mhbounds/tv_shift.hpp"

namespace mhb {
namespace {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config parsing. Every error names the JSON path of the offending field.
// ---------------------------------------------------------------------------

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void check_keys(const Json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(path, "unknown key '" + item.key() + "'");
  }
}

const Json& require(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing required key '") + key + "'");
  return *it;
}

double get_double(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return to_double(parse_rational(j.get<std::string>()));
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected a number (or a fraction string like \"1/3\")");
}

// Exact positions take strings or integers only; a bare float has already
// been rounded to binary, so it is rejected rather than silently converted.
Rational get_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected an integer or a string like \"1/5\" (exact value)");
}

long get_long(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

Vector get_vector(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
  Vector v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<int>(i)] = get_double(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

// Accepts [1, -2, 0] for one dimension or [[1, 0], [0, 1]] in general.
IntMatrix get_points(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of lattice points");
  if (j[0].is_array()) {
    const auto d = j[0].size();
    if (d == 0) fail(path + "[0]", "points must have at least one coordinate");
    IntMatrix pts(static_cast<int>(j.size()), static_cast<int>(d));
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string pi = path + "[" + std::to_string(i) + "]";
      if (!j[i].is_array() || j[i].size() != d) fail(pi, "ragged point list");
      for (std::size_t c = 0; c < d; ++c) {
        pts(static_cast<int>(i), static_cast<int>(c)) =
            static_cast<int>(get_long(j[i][c], pi + "[" + std::to_string(c) + "]"));
      }
    }
    return pts;
  }
  IntMatrix pts(static_cast<int>(j.size()), 1);
  for (std::size_t i = 0; i < j.size(); ++i) {
    pts(static_cast<int>(i), 0) =
        static_cast<int>(get_long(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return pts;
}

bool all_exact(const Json& mass) {
  for (const auto& m : mass) {
    if (!m.is_string() && !m.is_number_integer()) return false;
  }
  return true;
}

std::vector<Rational> get_rational_list(const Json& j, const std::string& path) {
  std::vector<Rational> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_rational(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<double> get_double_list(const Json& j, const std::string& path) {
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_double(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Target parse_target(const Json& j, const std::string& path) {
  const std::string kind = require(j, path, "kind").get<std::string>();
  if (kind == "gaussian") {
    check_keys(j, path, {"kind", "mean", "var"});
    return make_gaussian(get_vector(require(j, path, "mean"), path + ".mean"),
                         get_vector(require(j, path, "var"), path + ".var"));
  }
  if (kind == "uniform-interval") {
    check_keys(j, path, {"kind", "a", "b"});
    return make_uniform_interval(get_double(require(j, path, "a"), path + ".a"),
                                 get_double(require(j, path, "b"), path + ".b"));
  }
  if (kind == "uniform-mixture") {
    check_keys(j, path, {"kind", "pieces"});
    const Json& pieces = require(j, path, "pieces");
    if (!pieces.is_array() || pieces.empty()) fail(path + ".pieces", "expected a non-empty array");
    std::vector<WeightedInterval> out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const std::string pi = path + ".pieces[" + std::to_string(i) + "]";
      check_keys(pieces[i], pi, {"lo", "hi", "weight"});
      WeightedInterval w;
      w.lo = get_double(require(pieces[i], pi, "lo"), pi + ".lo");
      w.hi = get_double(require(pieces[i], pi, "hi"), pi + ".hi");
      w.weight = get_double(require(pieces[i], pi, "weight"), pi + ".weight");
      out.push_back(w);
    }
    return make_uniform_mixture(std::move(out));
  }
  if (kind == "star-unimodal") {
    check_keys(j, path, {"kind", "dim", "profile"});
    const Json& prof = require(j, path, "profile");
    if (!prof.is_array() || prof.size() < 2) fail(path + ".profile", "expected at least two knots");
    std::vector<RadialKnot> knots;
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const std::string pi = path + ".profile[" + std::to_string(i) + "]";
      check_keys(prof[i], pi, {"radius", "value"});
      RadialKnot k;
      k.radius = get_double(require(prof[i], pi, "radius"), pi + ".radius");
      k.value = get_double(require(prof[i], pi, "value"), pi + ".value");
      knots.push_back(k);
    }
    return make_star_unimodal(static_cast<int>(get_long(require(j, path, "dim"), path + ".dim")),
                              std::move(knots));
  }
  if (kind == "lattice") {
    check_keys(j, path, {"kind", "points", "mass"});
    IntMatrix pts = get_points(require(j, path, "points"), path + ".points");
    const Json& mass = require(j, path, "mass");
    if (!mass.is_array()) fail(path + ".mass", "expected an array");
    if (all_exact(mass)) {
      return make_lattice_pmf(std::move(pts), get_rational_list(mass, path + ".mass"));
    }
    return make_lattice_pmf(std::move(pts), get_double_list(mass, path + ".mass"));
  }
  if (kind == "lattice-uniform") {
    check_keys(j, path, {"kind", "k"});
    return make_lattice_uniform(static_cast<int>(get_long(require(j, path, "k"), path + ".k")));
  }
  if (kind == "bernoulli") {
    check_keys(j, path, {"kind", "p"});
    return make_bernoulli(get_rational(require(j, path, "p"), path + ".p"));
  }
  fail(path + ".kind", "unknown target kind '" + kind + "'");
}

Proposal parse_proposal(const Json& j, const std::string& path) {
  const std::string kind = require(j, path, "kind").get<std::string>();
  if (kind == "gaussian-step") {
    check_keys(j, path, {"kind", "sd"});
    return make_gaussian_step(get_vector(require(j, path, "sd"), path + ".sd"));
  }
  if (kind == "uniform-step") {
    check_keys(j, path, {"kind", "a", "b"});
    return make_uniform_step(get_double(require(j, path, "a"), path + ".a"),
                             get_double(require(j, path, "b"), path + ".b"));
  }
  if (kind == "two-sided-uniform") {
    check_keys(j, path, {"kind", "center", "halfwidth"});
    return make_two_sided_uniform_step(
        get_double(require(j, path, "center"), path + ".center"),
        get_double(require(j, path, "halfwidth"), path + ".halfwidth"));
  }
  if (kind == "lattice-step") {
    check_keys(j, path, {"kind", "points", "mass"});
    IntMatrix pts = get_points(require(j, path, "points"), path + ".points");
    const Json& mass = require(j, path, "mass");
    if (!mass.is_array()) fail(path + ".mass", "expected an array");
    if (all_exact(mass)) {
      return make_lattice_step(std::move(pts), get_rational_list(mass, path + ".mass"));
    }
    return make_lattice_step(std::move(pts), get_double_list(mass, path + ".mass"));
  }
  if (kind == "axis-odd") {
    check_keys(j, path, {"kind", "dim", "moves"});
    const Json& moves = require(j, path, "moves");
    if (!moves.is_array() || moves.empty()) fail(path + ".moves", "expected a non-empty array");
    std::vector<AxisMove> out;
    for (std::size_t i = 0; i < moves.size(); ++i) {
      const std::string pi = path + ".moves[" + std::to_string(i) + "]";
      check_keys(moves[i], pi, {"axis", "offset", "weight"});
      AxisMove m;
      m.axis = static_cast<int>(get_long(require(moves[i], pi, "axis"), pi + ".axis"));
      m.offset = get_long(require(moves[i], pi, "offset"), pi + ".offset");
      m.weight = get_rational(require(moves[i], pi, "weight"), pi + ".weight");
      out.push_back(m);
    }
    return make_axis_odd_step(static_cast<int>(get_long(require(j, path, "dim"), path + ".dim")),
                              std::move(out));
  }
  if (kind == "axis-gaussian") {
    check_keys(j, path, {"kind", "sd", "weight"});
    return make_axis_gaussian_step(get_vector(require(j, path, "sd"), path + ".sd"),
                                   get_vector(require(j, path, "weight"), path + ".weight"));
  }
  if (kind == "explicit") {
    check_keys(j, path, {"kind", "states", "q"});
    IntMatrix states = get_points(require(j, path, "states"), path + ".states");
    const Json& q = require(j, path, "q");
    if (!q.is_array() || static_cast<int>(q.size()) != states.rows()) {
      fail(path + ".q", "expected one row per state");
    }
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const std::string pi = path + ".q[" + std::to_string(i) + "]";
      if (!q[i].is_array() || q[i].size() != q.size()) fail(pi, "q must be square");
      rows.push_back(get_rational_list(q[i], pi));
    }
    return make_explicit_q(std::move(states), std::move(rows));
  }
  fail(path + ".kind", "unknown proposal kind '" + kind + "'");
}

const std::set<std::string> kModes = {
    "simulate",  "exact",          "formulas",  "verify-bounds",
    "tv-check",  "extremal-table", "rho-normal"};

Scenario parse_scenario(const Json& j, const std::string& path) {
  check_keys(j, path,
             {"id", "mode", "target", "proposal", "r_values", "lags", "c_vectors",
              "n_samples", "seed", "tolerance"});
  Scenario s;
  const Json& id = require(j, path, "id");
  if (!id.is_string() || id.get<std::string>().empty()) fail(path + ".id", "expected a non-empty string");
  s.id = id.get<std::string>();
  const Json& mode = require(j, path, "mode");
  if (!mode.is_string()) fail(path + ".mode", "expected a string");
  s.mode = mode.get<std::string>();
  if (kModes.count(s.mode) == 0) fail(path + ".mode", "unknown mode '" + s.mode + "'");

  if (j.contains("target")) s.target = parse_target(j["target"], path + ".target");
  if (j.contains("proposal")) s.proposal = parse_proposal(j["proposal"], path + ".proposal");
  if (j.contains("r_values")) {
    const Json& rv = j["r_values"];
    if (!rv.is_array() || rv.empty()) fail(path + ".r_values", "expected a non-empty array");
    for (std::size_t i = 0; i < rv.size(); ++i) {
      const std::string pi = path + ".r_values[" + std::to_string(i) + "]";
      const double r = get_double(rv[i], pi);
      if (!(r > 0.0) || !std::isfinite(r)) fail(pi, "orders must be positive and finite");
      s.r_values.push_back(r);
    }
  }
  if (j.contains("lags")) {
    const Json& lg = j["lags"];
    if (!lg.is_array() || lg.empty()) fail(path + ".lags", "expected a non-empty array");
    for (std::size_t i = 0; i < lg.size(); ++i) {
      const std::string pi = path + ".lags[" + std::to_string(i) + "]";
      const long lag = get_long(lg[i], pi);
      if (lag < 0 || lag > 1000000) fail(pi, "lag out of range");
      s.lags.push_back(static_cast<int>(lag));
    }
  }
  if (j.contains("c_vectors")) {
    const Json& cv = j["c_vectors"];
    if (!cv.is_array() || cv.empty()) fail(path + ".c_vectors", "expected a non-empty array of vectors");
    for (std::size_t i = 0; i < cv.size(); ++i) {
      s.c_vectors.push_back(get_vector(cv[i], path + ".c_vectors[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("n_samples")) {
    const long n = get_long(j["n_samples"], path + ".n_samples");
    if (n < 2) fail(path + ".n_samples", "need at least 2 transitions");
    s.n_samples = static_cast<std::size_t>(n);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      fail(path + ".seed", "expected a non-negative integer");
    }
    const auto seed = j["seed"].get<long long>();
    if (seed < 0) fail(path + ".seed", "expected a non-negative integer");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  if (j.contains("tolerance")) {
    const double tol = get_double(j["tolerance"], path + ".tolerance");
    if (!(tol > 0.0) || !std::isfinite(tol)) fail(path + ".tolerance", "tolerance must be positive");
    s.tolerance = tol;
  }

  // Mode-specific requirements, caught here so failures carry field paths.
  const bool needs_chain = s.mode == "simulate" || s.mode == "exact" ||
                           s.mode == "formulas" || s.mode == "verify-bounds";
  if (needs_chain) {
    if (!s.target) fail(path, "mode '" + s.mode + "' needs a target");
    if (!s.proposal) fail(path, "mode '" + s.mode + "' needs a proposal");
  }
  if (s.mode == "simulate") {
    if (!s.seed) fail(path, "mode 'simulate' needs an explicit seed");
    if (s.n_samples < 2) fail(path, "mode 'simulate' needs n_samples >= 2");
  }
  if (s.mode == "exact") {
    for (double r : s.r_values) {
      if (r != std::floor(r) || r < 1.0 || r > 64.0) {
        fail(path + ".r_values", "exact mode needs integer orders between 1 and 64");
      }
    }
  }
  if (s.mode == "tv-check") {
    if (!s.target) fail(path, "mode 'tv-check' needs a target");
    if (s.c_vectors.empty()) fail(path, "mode 'tv-check' reads the shifts from c_vectors");
  }
  if ((s.mode == "extremal-table" || s.mode == "rho-normal") && s.r_values.empty()) {
    fail(path, "mode '" + s.mode + "' needs r_values");
  }
  if (s.target) {
    const int d = dimension(*s.target);
    for (std::size_t i = 0; i < s.c_vectors.size(); ++i) {
      if (s.c_vectors[i].size() != d) {
        fail(path + ".c_vectors[" + std::to_string(i) + "]",
             "dimension mismatch with the target");
      }
    }
  }

  // Defaults for the chain modes.
  if (s.r_values.empty() && s.mode != "extremal-table" && s.mode != "rho-normal") {
    s.r_values = {2.0};
  }
  if (s.lags.empty()) s.lags = (s.mode == "exact") ? std::vector<int>{1, 2} : std::vector<int>{1};
  return s;
}

// ---------------------------------------------------------------------------
// Row builders shared by the mode runners.
// ---------------------------------------------------------------------------

ReportRow base_row(const std::string& id, const std::string& theorem, double r) {
  ReportRow row;
  row.scenario_id = id;
  row.theorem_id = theorem;
  row.r = r;
  return row;
}

// A computed quantity rather than an inequality: value in both columns,
// margin zero, pass unless the computation produced NaN.
ReportRow value_row(const std::string& id, const std::string& theorem, double r,
                    double value, const std::string& method,
                    const std::string& note = "", int lag = 1) {
  ReportRow row = base_row(id, theorem, r);
  row.lag = lag;
  row.lhs = value;
  row.rhs = value;
  row.margin = 0.0;
  row.pass = !std::isnan(value);
  row.method = method;
  row.note = note;
  return row;
}

// Agreement of two computations of the same quantity to a stated tolerance.
ReportRow agree_row(const std::string& id, const std::string& theorem, double r,
                    double a, double b, double tol, const std::string& method,
                    const std::string& note = "") {
  ReportRow row = base_row(id, theorem, r);
  row.lhs = std::abs(a - b);
  row.rhs = tol;
  row.margin = row.rhs - row.lhs;
  row.pass = row.lhs <= tol;
  row.method = method;
  row.note = note;
  return row;
}

ReportRow skip_row(const std::string& id, const std::string& theorem, double r,
                   const std::string& reason) {
  ReportRow row = base_row(id, theorem, r);
  row.pass = true;
  row.method = "skipped";
  row.note = "not-applicable: " + reason;
  return row;
}

double effective_tol(const Scenario& s, const RunOptions& opt) {
  if (s.tolerance) return *s.tolerance;
  if (opt.tolerance) return *opt.tolerance;
  return kDefaultTol;
}

// Increment-moment formula selected by support: the direct double integral
// covers lattices and one continuous dimension, the overlap form covers
// symmetric steps in any dimension.
MomentResult incr_any(const ChainSpec& spec, double r, double tol) {
  if (is_lattice(spec.target) || dimension(spec.target) == 1) {
    return incr_moment_rwmh(spec, r, tol);
  }
  return incr_moment_rwmh_symm(spec, r, tol);
}

std::string format_vec(const Vector& v) {
  std::string out = "[";
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// Mode runners.
// ---------------------------------------------------------------------------

std::vector<ReportRow> rows_simulate(const Scenario& s, const RunOptions& opt) {
  std::vector<ReportRow> rows;
  const ChainSpec spec = make_chain(*s.target, *s.proposal);
  const double tol = effective_tol(s, opt);
  const Path path = simulate(spec, s.n_samples, *s.seed);
  const PathStats stats = path_stats(path, s.lags, s.r_values, s.c_vectors);

  for (const LagEstimate& le : stats.lags) {
    {
      ReportRow row = base_row(s.id, "sim-sq-identity", 2.0);
      row.lag = le.lag;
      row.lhs = std::abs(le.sq_identity_residual);
      row.rhs = 1e-9 * (1.0 + le.pooled_var);
      row.margin = row.rhs - row.lhs;
      row.pass = row.lhs <= row.rhs;
      row.method = "simulation";
      row.note = "trCov = pooledVar - incr2/2, pooled over both pair endpoints";
      rows.push_back(row);
    }
    if (le.lag > 0 && le.lag % 2 == 0) {
      ReportRow row = base_row(s.id, "sim-even-lag", 2.0);
      row.lag = le.lag;
      row.lhs = 0.0;
      row.rhs = le.tr_cov;
      row.margin = le.tr_cov;
      row.error_bound = 4.0 * le.se_tr_cov;
      row.pass = bound_pass(row.margin, row.error_bound);
      row.method = "simulation";
      rows.push_back(row);
    }
    if (le.lag != 1) continue;
    // Cross-checks against the stationary formulas at lag one. Four standard
    // errors keeps the false-alarm rate per row below 1e-4.
    try {
      const double f = trace_corr_rwmh(spec);
      ReportRow row = agree_row(s.id, "sim-vs-formula-corr", 2.0, le.tr_corr, f,
                                4.0 * le.se_tr_corr + 1e-9 * (1.0 + std::abs(f)),
                                "simulation");
      row.error_bound = le.se_tr_corr;
      rows.push_back(row);
    } catch (const Error& e) {
      rows.push_back(skip_row(s.id, "sim-vs-formula-corr", 2.0, e.what()));
    }
    for (std::size_t oi = 0; oi < s.r_values.size(); ++oi) {
      const double r = s.r_values[oi];
      try {
        const MomentResult f = incr_any(spec, r, tol);
        ReportRow row = agree_row(
            s.id, "sim-vs-formula-incr", r, le.incr_moments[oi], f.value,
            4.0 * le.se_incr[oi] + f.error + 1e-9 * (1.0 + std::abs(f.value)),
            "simulation");
        row.error_bound = le.se_incr[oi];
        rows.push_back(row);
      } catch (const Error& e) {
        rows.push_back(skip_row(s.id, "sim-vs-formula-incr", r, e.what()));
      }
    }
  }
  for (ReportRow& row : rows) row.seed = *s.seed;
  return rows;
}

std::vector<ReportRow> rows_exact(const Scenario& s, const RunOptions&) {
  std::vector<ReportRow> rows;
  const ChainSpec spec = make_chain(*s.target, *s.proposal);
  const auto& lattice = std::get<LatticeTarget>(spec.target);
  const RationalChain chain = build_kernel(lattice, spec.proposal);

  {
    const double viol = check_reversibility(chain);
    ReportRow row = base_row(s.id, "exact-reversibility", 0.0);
    row.lhs = viol;
    row.rhs = 0.0;
    row.margin = -viol;
    row.pass = viol == 0.0;
    row.method = "exact";
    row.note = "max |pi_i k_ij - pi_j k_ji| over all state pairs";
    rows.push_back(row);
  }

  std::vector<unsigned> orders;
  for (double r : s.r_values) orders.push_back(static_cast<unsigned>(r));
  std::vector<std::vector<Rational>> dirs;
  for (const Vector& c : s.c_vectors) {
    std::vector<Rational> cr;
    for (int i = 0; i < c.size(); ++i) cr.emplace_back(c[i]);
    dirs.push_back(std::move(cr));
  }

  for (int lag : s.lags) {
    const ExactLagStats<Rational> st = exact_lag_stats(chain, lag, orders, dirs);
    rows.push_back(value_row(s.id, "exact-tr-cov", 2.0, to_double(st.tr_cov), "exact",
                             rational_to_string(st.tr_cov), lag));
    rows.push_back(value_row(s.id, "exact-tr-corr", 2.0, to_double(st.tr_corr), "exact",
                             rational_to_string(st.tr_corr), lag));
    for (std::size_t oi = 0; oi < orders.size(); ++oi) {
      rows.push_back(value_row(s.id, "exact-incr", static_cast<double>(orders[oi]),
                               to_double(st.incr_moments[oi]), "exact",
                               rational_to_string(st.incr_moments[oi]), lag));
    }
    for (std::size_t ci = 0; ci < dirs.size(); ++ci) {
      rows.push_back(value_row(s.id, "exact-cov-linear", 2.0,
                               to_double(st.cov_linear[ci]), "exact",
                               "c = " + format_vec(s.c_vectors[ci]), lag));
    }
  }

  std::vector<int> evens;
  for (int lag : s.lags) {
    if (lag > 0 && lag % 2 == 0) evens.push_back(lag);
  }
  if (!evens.empty()) {
    for (const BoundReport& rep : even_lag_report(chain, evens)) {
      rows.push_back(to_report_row(s.id, rep));
    }
  }
  return rows;
}

std::vector<ReportRow> rows_formulas(const Scenario& s, const RunOptions& opt) {
  std::vector<ReportRow> rows;
  const ChainSpec spec = make_chain(*s.target, *s.proposal);
  const double tol = effective_tol(s, opt);
  const bool lattice = is_lattice(spec.target);
  const int d = dimension(spec.target);

  for (double r : s.r_values) {
    MomentResult a;
    try {
      a = incr_any(spec, r, tol);
    } catch (const Error& e) {
      rows.push_back(skip_row(s.id, "formula-incr", r, e.what()));
      continue;
    }
    {
      ReportRow row = value_row(s.id, "formula-incr", r, a.value, a.method);
      row.error_bound = a.error;
      rows.push_back(row);
    }
    if (!lattice && d >= 1 && is_symmetric(spec.proposal)) {
      try {
        const MomentResult b = incr_moment_rwmh_symm(spec, r, tol);
        rows.push_back(agree_row(s.id, "formula-equiv-symm", r, a.value, b.value,
                                 1e-8 * (1.0 + std::abs(a.value)) + 10.0 * (a.error + b.error),
                                 "quadrature"));
      } catch (const Error& e) {
        rows.push_back(skip_row(s.id, "formula-equiv-symm", r, e.what()));
      }
    }
    if (d == 1 && is_symmetric(spec.target) && is_unimodal(spec.target)) {
      try {
        const MomentResult c = incr_moment_symm_unimodal(spec, r, tol);
        rows.push_back(agree_row(s.id, "formula-equiv-unimodal", r, a.value, c.value,
                                 1e-8 * (1.0 + std::abs(a.value)) + 10.0 * (a.error + c.error),
                                 c.method));
      } catch (const Error& e) {
        rows.push_back(skip_row(s.id, "formula-equiv-unimodal", r, e.what()));
      }
    }
    if (lattice && r == std::floor(r) && r >= 1.0 && r <= 64.0) {
      const auto& lt = std::get<LatticeTarget>(spec.target);
      try {
        const Rational exact = incr_moment_rwmh_exact(lt, spec.proposal,
                                                      static_cast<unsigned>(r));
        rows.push_back(agree_row(s.id, "formula-equiv-exact", r, a.value,
                                 to_double(exact), 1e-12 * (1.0 + std::abs(a.value)),
                                 "exact", rational_to_string(exact)));
      } catch (const Error& e) {
        rows.push_back(skip_row(s.id, "formula-equiv-exact", r, e.what()));
      }
    }
  }

  try {
    rows.push_back(value_row(s.id, "formula-tr-cov", 2.0, trace_cov_rwmh(spec), "formula"));
    rows.push_back(value_row(s.id, "formula-tr-corr", 2.0, trace_corr_rwmh(spec), "formula"));
  } catch (const Error& e) {
    rows.push_back(skip_row(s.id, "formula-tr-corr", 2.0, e.what()));
  }

  for (double r : s.r_values) {
    try {
      const SymmetrizationFactors sf = symmetrization_factors(spec.target, spec.proposal, r);
      if (std::isnan(sf.alpha)) {
        rows.push_back(skip_row(s.id, "formula-alpha", r,
                                "target symmetrization leaves the chain frozen"));
      } else {
        rows.push_back(value_row(s.id, "formula-alpha", r, sf.alpha, "formula",
                                 std::isinf(sf.alpha) ? "symmetrized chain moves, original is frozen" : ""));
      }
      if (std::isnan(sf.beta)) {
        rows.push_back(skip_row(s.id, "formula-beta", r,
                                "step symmetrization leaves the chain frozen"));
      } else {
        rows.push_back(value_row(s.id, "formula-beta", r, sf.beta, "formula",
                                 std::isinf(sf.beta) ? "step symmetrization unfreezes the chain" : ""));
      }
    } catch (const Error& e) {
      rows.push_back(skip_row(s.id, "formula-alpha", r, e.what()));
      rows.push_back(skip_row(s.id, "formula-beta", r, e.what()));
    }
  }
  return rows;
}

std::vector<ReportRow> rows_verify(const Scenario& s, const RunOptions&) {
  std::vector<ReportRow> rows;
  const ChainSpec spec = make_chain(*s.target, *s.proposal);
  const Vector mean = mean_vector(spec.target);
  const int d = dimension(spec.target);

  for (const BoundReport& rep : corr_reports(spec)) {
    rows.push_back(to_report_row(s.id, rep));
  }
  for (double r : s.r_values) {
    try {
      rows.push_back(to_report_row(s.id, check_general_bound(spec, r, mean)));
    } catch (const Error& e) {
      rows.push_back(skip_row(s.id, "incr-moment-upper", r, e.what()));
    }
    Vector center = Vector::Zero(d);
    if (d == 1 && is_unimodal(spec.target)) center[0] = mode_1d(spec.target);
    try {
      rows.push_back(to_report_row(s.id, check_unimodal_bound(spec, r, center)));
    } catch (const Error& e) {
      rows.push_back(skip_row(s.id, "unimodal-upper", r, e.what()));
    }
  }
  for (const Vector& c : s.c_vectors) {
    for (double r : s.r_values) {
      try {
        for (const BoundReport& rep : check_linear_bound(spec, c, r, c.dot(mean))) {
          ReportRow row = to_report_row(s.id, rep);
          row.note = row.note.empty() ? "c = " + format_vec(c) : row.note + "; c = " + format_vec(c);
          rows.push_back(row);
        }
      } catch (const Error& e) {
        rows.push_back(skip_row(s.id, "linear-upper", r, e.what()));
      }
    }
  }
  if (is_lattice(spec.target)) {
    const auto& lt = std::get<LatticeTarget>(spec.target);
    for (double r : s.r_values) {
      try {
        rows.push_back(to_report_row(s.id, highdim_check(lt, spec.proposal, r)));
      } catch (const Error& e) {
        rows.push_back(skip_row(s.id, "extremal-transfer", r, e.what()));
      }
    }
  } else if (d == 1 && is_unimodal(spec.target) && mode_1d(spec.target) == 0.0 &&
             is_symmetric(spec.target)) {
    // Tail-moment sharpening probed at a few scales of the target.
    const double scale = std::sqrt(absolute_moment(spec.target, 2.0));
    for (double r : s.r_values) {
      for (double factor : {0.25, 0.5, 1.0, 2.0}) {
        try {
          BoundReport rep = winkler_check(spec.target, factor * scale, r);
          rep.note = rep.note.empty() ? "y = " + format_double(factor * scale)
                                      : rep.note + "; y = " + format_double(factor * scale);
          rows.push_back(to_report_row(s.id, rep));
        } catch (const Error& e) {
          rows.push_back(skip_row(s.id, "winkler", r, e.what()));
        }
      }
    }
  }
  return rows;
}

std::vector<ReportRow> rows_tv(const Scenario& s, const RunOptions&) {
  std::vector<ReportRow> rows;
  const Target& target = *s.target;
  const Vector mean = mean_vector(target);

  for (const Vector& z : s.c_vectors) {
    double tv;
    std::string method;
    if (is_lattice(target)) {
      Eigen::VectorXi zi(z.size());
      for (int i = 0; i < z.size(); ++i) {
        const double rounded = std::nearbyint(z[i]);
        if (std::abs(z[i] - rounded) > 1e-9) {
          throw PreconditionFailed("lattice shifts must have integer coordinates");
        }
        zi[i] = static_cast<int>(rounded);
      }
      tv = to_double(tv_shift_exact(std::get<LatticeTarget>(target), zi));
      method = "exact";
    } else {
      tv = tv_shift(target, z);
      method = "quadrature";
    }
    rows.push_back(value_row(s.id, "tv-distance", 0.0, tv, method, "z = " + format_vec(z)));

    for (double r : s.r_values) {
      if (r >= 2.0) {
        try {
          BoundReport rep = tvlb_margin(target, 0.5, z, mean, r);
          rep.note = rep.note.empty() ? "z = " + format_vec(z) : rep.note + "; z = " + format_vec(z);
          rows.push_back(to_report_row(s.id, rep));
        } catch (const Error& e) {
          rows.push_back(skip_row(s.id, "tv-shift-lower", r, e.what()));
        }
      }
      if (r >= 1.0) {
        try {
          BoundReport rep = tvlb_margin_symm(target, z, mean, r);
          rep.note = rep.note.empty() ? "z = " + format_vec(z) : rep.note + "; z = " + format_vec(z);
          rows.push_back(to_report_row(s.id, rep));
        } catch (const Error& e) {
          rows.push_back(skip_row(s.id, "tv-shift-lower-symm", r, e.what()));
        }
      }
    }
  }
  return rows;
}

std::vector<ReportRow> rows_extremal(const Scenario& s, const RunOptions& opt) {
  std::vector<ReportRow> rows;
  for (double r : s.r_values) {
    ExtremalResult res;
    try {
      res = s_of_r(r);
    } catch (const Error& e) {
      rows.push_back(skip_row(s.id, "extremal-s", r, e.what()));
      continue;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "argmax k = %ld, y = %ld; ln s = %s",
                  res.argmax_k, res.argmax_y, format_double(res.log_value).c_str());
    rows.push_back(value_row(s.id, "extremal-s", r, res.value, "scan", buf));

    const bool log_space = !std::isfinite(res.value);
    const std::string note = log_space ? "compared in log space" : "";
    {
      ReportRow row = base_row(s.id, "extremal-sandwich-lower", r);
      row.lhs = log_space ? r * std::log(2.0 * r / (r + 1.0))
                          : std::pow(2.0 * r / (r + 1.0), r);
      row.rhs = log_space ? res.log_value : res.value;
      row.margin = row.rhs - row.lhs;
      row.error_bound = 1e-12 * (1.0 + std::abs(row.lhs) + std::abs(row.rhs));
      row.pass = bound_pass(row.margin, row.error_bound);
      row.method = "scan";
      row.note = note;
      rows.push_back(row);
    }
    if (r >= 1.0) {
      ReportRow row = base_row(s.id, "extremal-sandwich-upper", r);
      row.lhs = log_space ? res.log_value : res.value;
      row.rhs = log_space ? (r - 1.0) * std::log(2.0) : std::pow(2.0, r - 1.0);
      row.margin = row.rhs - row.lhs;
      row.error_bound = 1e-12 * (1.0 + std::abs(row.lhs) + std::abs(row.rhs));
      row.pass = bound_pass(row.margin, row.error_bound);
      row.strict_expected = r > 1.0;
      row.method = "scan";
      row.note = note;
      rows.push_back(row);
    }
    if (opt.exact && r == std::floor(r) && r >= 1.0 && r <= 40.0) {
      const ExactExtremal exact = s_of_r_exact(static_cast<unsigned>(r));
      rows.push_back(agree_row(s.id, "extremal-exact", r, to_double(exact.value),
                               res.value, 1e-12 * (1.0 + res.value), "exact",
                               rational_to_string(exact.value)));
    }
  }
  return rows;
}

std::vector<ReportRow> rows_rho(const Scenario& s, const RunOptions&) {
  std::vector<ReportRow> rows;
  for (double r : s.r_values) {
    const RhoNormal rho = normal_example_rho(r);
    rows.push_back(value_row(s.id, "rho-normal", r, rho.rho, "quadrature"));
    {
      ReportRow row = base_row(s.id, "rho-le-hat", r);
      row.lhs = rho.rho;
      row.rhs = rho.rho_hat;
      row.margin = row.rhs - row.lhs;
      row.error_bound = 1e-9 * (1.0 + std::abs(row.rhs));
      row.pass = bound_pass(row.margin, row.error_bound);
      row.method = "quadrature";
      rows.push_back(row);
    }
    {
      ReportRow row = base_row(s.id, "rho-lt-tilde", r);
      row.lhs = rho.rho;
      row.rhs = rho.rho_tilde;
      row.margin = row.rhs - row.lhs;
      row.error_bound = 1e-9 * (1.0 + std::abs(row.rhs));
      row.pass = bound_pass(row.margin, row.error_bound);
      row.strict_expected = true;
      row.method = "quadrature";
      row.note = "large-r comparison curve";
      rows.push_back(row);
    }
    if (r <= 2.0) {
      ReportRow row = base_row(s.id, "rho-small-r-upper", r);
      row.lhs = rho.rho;
      row.rhs = rho.small_r_bound;
      row.margin = row.rhs - row.lhs;
      row.error_bound = 1e-9 * (1.0 + std::abs(row.rhs));
      row.pass = bound_pass(row.margin, row.error_bound);
      row.method = "quadrature";
      row.note = "2^((r-2)/2) cap for r <= 2";
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points.
// ---------------------------------------------------------------------------

RunConfig parse_config(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  check_keys(doc, "$", {"schema", "scenarios"});
  const Json& schema = require(doc, "$", "schema");
  if (!schema.is_number_integer() || schema.get<int>() != 1) {
    fail("$.schema", "expected the integer 1");
  }
  const Json& scenarios = require(doc, "$", "scenarios");
  if (!scenarios.is_array() || scenarios.empty()) {
    fail("$.scenarios", "expected a non-empty array");
  }
  RunConfig config;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    Scenario s = parse_scenario(scenarios[i], "$.scenarios[" + std::to_string(i) + "]");
    if (!seen.insert(s.id).second) {
      fail("$.scenarios[" + std::to_string(i) + "].id", "duplicate id '" + s.id + "'");
    }
    config.scenarios.push_back(std::move(s));
  }
  return config;
}

std::vector<ReportRow> run_scenario(const Scenario& scenario,
                                    const RunOptions& options) {
  try {
    if (scenario.mode == "simulate") return rows_simulate(scenario, options);
    if (scenario.mode == "exact") return rows_exact(scenario, options);
    if (scenario.mode == "formulas") return rows_formulas(scenario, options);
    if (scenario.mode == "verify-bounds") return rows_verify(scenario, options);
    if (scenario.mode == "tv-check") return rows_tv(scenario, options);
    if (scenario.mode == "extremal-table") return rows_extremal(scenario, options);
    if (scenario.mode == "rho-normal") return rows_rho(scenario, options);
    throw ConfigError("unknown mode '" + scenario.mode + "'");
  } catch (const std::exception& e) {
    ReportRow row = base_row(scenario.id, "scenario-error", 0.0);
    row.pass = false;
    row.method = "error";
    row.note = e.what();
    return {row};
  }
}

std::vector<ReportRow> run_config(const RunConfig& config,
                                  const RunOptions& options) {
  const std::size_t n = config.scenarios.size();
  std::vector<std::vector<ReportRow>> results(n);
  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      results[i] = run_scenario(config.scenarios[i], options);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          results[i] = run_scenario(config.scenarios[i], options);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  std::vector<ReportRow> rows;
  for (std::vector<ReportRow>& part : results) {
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Fixture suite.
// ---------------------------------------------------------------------------

namespace {

ReportRow exact_eq_row(const std::string& id, const std::string& theorem, double r,
                       const Rational& got, const Rational& want,
                       const std::string& note) {
  ReportRow row = base_row(id, theorem, r);
  row.lhs = to_double(got);
  row.rhs = to_double(want);
  row.margin = 0.0;
  row.pass = got == want;
  row.method = "exact";
  row.note = note + "; value " + rational_to_string(got);
  return row;
}

ReportRow lemma_row(const std::string& id, const SequenceInstance& inst,
                    EqualityTag want_tag, bool want_negative,
                    const std::string& note) {
  const double gap = lemma_gap(inst);
  const double scale = lemma_scale(inst);
  ReportRow row = base_row(id, want_negative ? "seq-bound-counterexample" : "seq-bound-equality",
                           inst.r);
  row.lhs = want_negative ? gap : std::abs(gap);
  row.rhs = want_negative ? 0.0 : 1e-12 * (1.0 + scale);
  row.margin = row.rhs - row.lhs;
  row.method = "closed-form";
  if (want_negative) {
    row.pass = gap < 0.0 && !lemma_in_domain(inst);
    row.note = note + "; gap = " + format_double(gap);
  } else {
    const EqualityClass cls = classify_equality(inst);
    row.pass = row.lhs <= row.rhs && cls.tag == want_tag;
    row.note = note + "; class = " + std::string(equality_tag_name(cls.tag));
  }
  return row;
}

}  // namespace

std::vector<ReportRow> emit_fixture_suite() {
  std::vector<ReportRow> rows;

  // Extremal constants with exact rational values.
  {
    const ExactExtremal s2 = s_of_r_exact(2);
    ReportRow row = exact_eq_row("s2-exact", "extremal-s", 2.0, s2.value,
                                 Rational(9, 5), "s(2) = 9/5 at k = 2");
    row.pass = row.pass && s2.argmax_k == 2 && s2.argmax_y == 1;
    rows.push_back(row);
  }
  rows.push_back(exact_eq_row("g3-exact", "extremal-edge-ratio", 2.0,
                              g_ratio_exact(3, 2), Rational(25, 14),
                              "edge ratio g(3; 2) = 25/14"));
  {
    const Thresholds th = thresholds(2.0);
    ReportRow row = base_row("k-edge-2", "extremal-edge-threshold", 2.0);
    row.lhs = static_cast<double>(th.k_edge);
    row.rhs = 3.0;
    row.pass = th.k_edge == 3;
    row.method = "closed-form";
    row.note = "edge maximizers stop at k = 3 when r = 2";
    rows.push_back(row);
  }

  // Uniform {-2..2} with step +-3: increment moment 18/5 and the exact 1/10
  // autocorrelation floor.
  {
    const Target target = make_lattice_uniform(2);
    IntMatrix pts(2, 1);
    pts << -3, 3;
    const Proposal step = make_lattice_step(pts, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    const auto& lt = std::get<LatticeTarget>(target);
    rows.push_back(exact_eq_row("uniform5-step3", "formula-incr", 2.0,
                                incr_moment_rwmh_exact(lt, step, 2), Rational(18, 5),
                                "uniform{-2..2} with step +-3"));
    const RationalChain chain = build_kernel(lt, step);
    const ExactLagStats<Rational> st = exact_lag_stats(chain, 1, {});
    rows.push_back(exact_eq_row("uniform5-step3", "corr-ge-1/10-odd-lattice", 2.0,
                                st.tr_corr, Rational(1, 10),
                                "the odd-step lattice floor is attained"));
  }

  // Two-point target {-1, +1} with step +-2: the weak bound 2^(r-1) E|X|^r is
  // attained exactly at every order.
  for (unsigned r : {2u, 3u, 4u}) {
    IntMatrix tp(2, 1);
    tp << -1, 1;
    const Target target = make_lattice_pmf(tp, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    IntMatrix sp(2, 1);
    sp << -2, 2;
    const Proposal step = make_lattice_step(sp, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    const Rational incr = incr_moment_rwmh_exact(std::get<LatticeTarget>(target), step, r);
    rows.push_back(exact_eq_row("pair-equality-r" + std::to_string(r),
                                "incr-moment-upper-lattice", static_cast<double>(r),
                                incr, rational_pow(Rational(2), r - 1),
                                "one opposite pair of blocks attains 2^(r-1) E|X|^r"));
  }

  // Deterministic swap chain: the most negative autocorrelation.
  {
    IntMatrix states(2, 1);
    states << -1, 1;
    const Target target = make_lattice_pmf(states, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    const Proposal swap = make_explicit_q(states, {{Rational(0), Rational(1)},
                                                   {Rational(1), Rational(0)}});
    const RationalChain chain = build_kernel(std::get<LatticeTarget>(target), swap);
    const ExactLagStats<Rational> st = exact_lag_stats(chain, 1, {});
    rows.push_back(exact_eq_row("swap-corr", "corr-swap", 2.0, st.tr_corr, Rational(-1),
                                "X_1 = -X_0 gives correlation -1"));
    const ExactLagStats<Rational> st2 = exact_lag_stats(chain, 2, {});
    rows.push_back(exact_eq_row("swap-corr", "even-lag-nonneg", 2.0, st2.tr_corr,
                                Rational(1), "lag 2 of the swap chain is the identity"));
  }

  // Shift overlap closed form: d_TV(N(0,1), N(1,1)) = 2 Phi(1/2) - 1.
  {
    const Target normal = make_gaussian(Vector::Zero(1), Vector::Ones(1));
    Vector z(1);
    z << 1.0;
    rows.push_back(agree_row("tv-gauss-unit-shift", "tv-distance", 0.0,
                             tv_shift(normal, z), 0.38292492254802624,
                             1e-9, "quadrature", "2 Phi(1/2) - 1"));
  }

  // Sequence-bound equality classes, one fixture per family.
  rows.push_back(lemma_row("lemma-weighted-pair",
                           SequenceInstance{{{-1, 0.3}, {0, 0.7}}, 0.3, 0.3, 2.0},
                           EqualityTag::kWeightedPair, false,
                           "adjacent pair with matched split weights"));
  rows.push_back(lemma_row("lemma-balanced-pair",
                           SequenceInstance{{{-1, 0.5}, {0, 0.5}}, 0.5, 0.5, 3.0},
                           EqualityTag::kBalancedPair, false,
                           "offset 1/2 balances any order"));
  rows.push_back(lemma_row("lemma-centered-triple",
                           SequenceInstance{{{-1, 0.2}, {0, 0.6}, {1, 0.2}}, 0.0, 0.5, 1.0},
                           EqualityTag::kCenteredTriple, false,
                           "r = 1 centered triple"));

  // Outside the proved (r, phi) domain the bound genuinely fails.
  rows.push_back(lemma_row("lemma-probe-phi",
                           SequenceInstance{{{-1, 0.2}, {0, 0.8}}, 0.0, 0.2, 1.5},
                           EqualityTag::kStrict, true,
                           "r < 2 with an unbalanced split"));
  rows.push_back(lemma_row("lemma-probe-small-r",
                           SequenceInstance{{{0, 0.5}, {1, 0.5}}, 0.0, 0.5, 0.5},
                           EqualityTag::kStrict, true,
                           "r < 1 fails even at phi = 1/2; gap = 2^(r-3) - 1/4"));

  // Near-extremal continuous chain: uniform(-3, 3) with step +-U(4 - eps, 4 + eps)
  // has increment ratio (16 - eps^2)/9, close to the 16/9 cap.
  {
    const double eps = 0.01;
    const ChainSpec spec = make_chain(make_uniform_interval(-3.0, 3.0),
                                      make_two_sided_uniform_step(4.0, eps));
    const MomentResult incr = incr_moment_rwmh(spec, 2.0, kDefaultTol);
    const double ratio = incr.value / 3.0;
    rows.push_back(agree_row("sharpness-eps", "sharpness-ratio", 2.0, ratio,
                             (16.0 - eps * eps) / 9.0, 1e-8, incr.method,
                             "ratio (16 - eps^2)/9 at eps = 0.01"));
    ReportRow strict = base_row("sharpness-eps", "incr-moment-upper", 2.0);
    strict.lhs = ratio;
    strict.rhs = 16.0 / 9.0;
    strict.margin = strict.rhs - strict.lhs;
    strict.strict_expected = true;
    strict.pass = ratio < 16.0 / 9.0 && ratio > 1.70;
    strict.method = incr.method;
    strict.note = "strictly below the two-block limit 16/9";
    rows.push_back(strict);
  }

  // Frozen chain whose step symmetrization unfreezes it: alpha = infinity.
  {
    IntMatrix pts(2, 1);
    pts << -1, 2;
    const Target target = make_lattice_pmf(pts, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    IntMatrix sp(2, 1);
    sp << -1, 1;
    const Proposal step = make_lattice_step(sp, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    const SymmetrizationFactors sf = symmetrization_factors(target, step, 2.0);
    ReportRow row = base_row("pi5-alpha-infinite", "formula-alpha", 2.0);
    row.lhs = sf.alpha;
    row.rhs = sf.alpha;
    row.pass = std::isinf(sf.alpha);
    row.method = "exact";
    row.note = "every proposal leaves the support, symmetrized target moves";
    rows.push_back(row);
  }

  // Uniform {-1, 0, 1} with step +-2: the general lattice bound is attained
  // with margin exactly zero while the continuous unimodal constant would be
  // violated, so its lattice restriction is essential.
  {
    const Target target = make_lattice_uniform(1);
    IntMatrix sp(2, 1);
    sp << -2, 2;
    const Proposal step = make_lattice_step(sp, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    const auto& lt = std::get<LatticeTarget>(target);
    const Rational incr = incr_moment_rwmh_exact(lt, step, 2);
    rows.push_back(exact_eq_row("bad-discrete-unimodal", "incr-moment-upper-lattice", 2.0,
                                incr, Rational(4, 3), "margin is exactly zero"));
    ReportRow viol = base_row("bad-discrete-unimodal", "unimodal-counterexample", 2.0);
    viol.lhs = (16.0 / 9.0) * (2.0 / 3.0);  // the continuous constant times E|X|^2
    viol.rhs = to_double(incr);
    viol.margin = viol.rhs - viol.lhs;
    viol.pass = viol.lhs < viol.rhs;
    viol.method = "exact";
    viol.note = "(2r/(r+1))^r E|X|^r < E|Delta|^r here, so the constant needs continuity";
    rows.push_back(viol);
  }

  // Gaussian chain closed form: with step sd = 2 the lag-1 trace correlation
  // is exactly 2/pi.
  {
    const ChainSpec spec = make_chain(make_gaussian(Vector::Zero(1), Vector::Ones(1)),
                                      make_gaussian_step(2.0 * Vector::Ones(1)));
    rows.push_back(agree_row("gauss-chain-corr", "formula-tr-corr", 2.0,
                             trace_corr_rwmh(spec), 2.0 / M_PI, 1e-9, "quadrature",
                             "N(0,1) target, N(0,4) step"));
  }

  // Uniform chain closed forms: U(-1,1) target with U(-2,2) step.
  {
    const ChainSpec spec = make_chain(make_uniform_interval(-1.0, 1.0),
                                      make_uniform_step(-2.0, 2.0));
    const MomentResult incr = incr_moment_rwmh(spec, 2.0, kDefaultTol);
    rows.push_back(agree_row("unif-chain-closed-form", "formula-incr", 2.0,
                             incr.value, 1.0 / 3.0, 1e-9, incr.method,
                             "E|Delta|^2 = 1/3"));
    rows.push_back(agree_row("unif-chain-closed-form", "formula-tr-cov", 2.0,
                             trace_cov_rwmh(spec), 1.0 / 6.0, 1e-9, "quadrature",
                             "trCov = 1/6"));
    rows.push_back(agree_row("unif-chain-closed-form", "formula-tr-corr", 2.0,
                             trace_corr_rwmh(spec), 0.5, 1e-9, "quadrature",
                             "trCorr = 1/2"));
  }

  // Reference-curve anchors.
  {
    const double knee = 1.0 + std::sqrt(2.0);
    const RhoNormal at_knee = normal_example_rho(knee);
    rows.push_back(agree_row("rho-hat-knee", "rho-hat-unit", knee, at_knee.rho_hat,
                             1.0, 1e-12, "closed-form",
                             "(sqrt(2) r/(r+1))^r = 1 exactly at r = 1 + sqrt(2)"));
    const RhoNormal at_one = normal_example_rho(1.0);
    rows.push_back(agree_row("rho-tilde-unit", "rho-tilde-unit", 1.0, at_one.rho_tilde,
                             1.0, 1e-12, "closed-form", "comparison curve equals 1 at r = 1"));
    rows.push_back(agree_row("rho-exact-r1", "rho-normal", 1.0, at_one.rho,
                             std::sqrt(2.0) - 1.0, 1e-9, "quadrature",
                             "rho(1) = sqrt(2) - 1"));
    const RhoNormal at_two = normal_example_rho(2.0);
    rows.push_back(agree_row("rho-exact-r2", "rho-normal", 2.0, at_two.rho,
                             1.0 - 2.0 / M_PI, 1e-9, "quadrature",
                             "rho(2) = 1 - 2/pi"));
  }

  return rows;
}

}  // namespace mhb
