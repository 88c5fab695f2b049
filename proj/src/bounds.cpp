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

#include "mhbounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "mhbounds/moment_formulas.hpp"
#include "mhbounds/quadrature.hpp"

namespace mhb {
namespace {

// Increment moment dispatch shared by the bound checks: lattice and d = 1
// chains go through the overlap formula, higher-dimensional continuous chains
// need the symmetric-step reduction.
MomentResult incr_for_bound(const ChainSpec& spec, double r) {
  if (is_lattice(spec) || dimension(spec.target) == 1) {
    return incr_moment_rwmh(spec, r);
  }
  return incr_moment_rwmh_symm(spec, r);
}

double report_eps(double lhs, double rhs) {
  return 1e-12 * (1.0 + std::abs(lhs) + std::abs(rhs));
}

BoundReport skipped_row(const std::string& theorem_id, double r,
                        const std::string& reason) {
  BoundReport rep;
  rep.theorem_id = theorem_id;
  rep.r = r;
  rep.strict_expected = false;
  rep.pass = true;
  rep.method = "skipped";
  rep.note = "not-applicable: " + reason;
  return rep;
}

BoundReport bound_row(const std::string& theorem_id, double r, double lhs,
                      double rhs, bool strict, const std::string& method,
                      double error_bound, const std::string& note = "") {
  BoundReport rep;
  rep.theorem_id = theorem_id;
  rep.r = r;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.margin = rhs - lhs;
  rep.strict_expected = strict;
  rep.method = method;
  rep.error_bound = error_bound;
  rep.pass = bound_pass(rep.margin, error_bound);
  rep.note = note;
  return rep;
}

// Everything the correlation corollaries need about the lag-1 joint law.
struct CorrParts {
  bool computable = false;
  double var = 0.0;
  double incr2 = 0.0;
  double corr = 0.0;
  double error = 0.0;  // error bound on corr
  std::string method;
  std::string blocker;  // why not computable
};

CorrParts corr_parts(const ChainSpec& spec) {
  CorrParts parts;
  if (is_lattice(spec)) {
    const auto& target = std::get<LatticeTarget>(spec.target);
    const DoubleChain chain = build_kernel_double(target, spec.proposal);
    const ExactLagStats<double> stats = exact_lag_stats(chain, 1, {2.0});
    parts.computable = true;
    parts.var = stats.tr_var;
    parts.incr2 = stats.incr_moments[0];
    parts.corr = stats.tr_corr;
    parts.error = 1e-13 * (1.0 + std::abs(parts.corr));
    parts.method = "exact";
    return parts;
  }
  if (dimension(spec.target) > 1 && !is_symmetric(spec.proposal)) {
    parts.blocker = "no increment formula for asymmetric steps in d > 1";
    return parts;
  }
  const double var = absolute_moment(spec.target, 2.0, mean_vector(spec.target));
  if (!(var > 0.0)) {
    parts.blocker = "target has zero variance";
    return parts;
  }
  const MomentResult incr = incr_for_bound(spec, 2.0);
  parts.computable = true;
  parts.var = var;
  parts.incr2 = incr.value;
  parts.corr = 1.0 - incr.value / (2.0 * var);
  parts.error = incr.error / (2.0 * var) + 1e-11 * (1.0 + std::abs(parts.corr));
  parts.method = incr.method;
  return parts;
}

bool mode_matches(const Target& t, double m) {
  const double at_m = density_at(t, m);
  const double at_mode = density_at(t, mode_1d(t));
  return at_m >= at_mode * (1.0 - 1e-9);
}

}  // namespace

BoundReport check_general_bound(const ChainSpec& spec, double r,
                                const Vector& m) {
  if (m.size() != dimension(spec.target)) {
    throw DimensionMismatch("center m has the wrong dimension");
  }
  if (!is_random_walk(spec.proposal)) {
    throw SupportMismatch("the increment bound needs a translation step law");
  }
  const bool symmetric = is_symmetric(spec.proposal);
  if (!(r >= 2.0 || (r >= 1.0 && symmetric))) {
    throw RangeError(
        "the increment bound needs r >= 2, or r >= 1 with a symmetric step");
  }
  const bool lattice = is_lattice(spec);
  const MomentResult lhs = incr_for_bound(spec, r);
  const double rhs = std::pow(2.0, r - 1.0) * absolute_moment(spec.target, r, m);
  const bool strict = !lattice && r > 1.0;
  std::string note;
  if (!lattice && r == 1.0) {
    note = "equality attainable at r = 1 (mass in one opposite pair of blocks)";
  }
  return bound_row(lattice ? "incr-moment-upper-lattice" : "incr-moment-upper",
                   r, lhs.value, rhs, strict, lhs.method,
                   lhs.error + report_eps(lhs.value, rhs), note);
}

BoundReport check_unimodal_bound(const ChainSpec& spec, double r,
                                 const Vector& m) {
  if (m.size() != dimension(spec.target)) {
    throw DimensionMismatch("center m has the wrong dimension");
  }
  if (!is_random_walk(spec.proposal)) {
    throw SupportMismatch("the increment bound needs a translation step law");
  }
  if (is_lattice(spec)) {
    throw PreconditionFailed(
        "the unimodal constant holds for continuous targets only");
  }
  if (!(r >= 1.0)) {
    throw RangeError("the unimodal bound needs r >= 1");
  }
  if (!is_symmetric(spec.proposal)) {
    throw NotSymmetric("the unimodal bound needs a symmetric step law");
  }
  const int d = dimension(spec.target);
  if (d == 1) {
    if (!is_unimodal(spec.target)) {
      throw PreconditionFailed("target must be unimodal");
    }
    if (!mode_matches(spec.target, m(0))) {
      throw PreconditionFailed("m must be a mode of the target");
    }
  } else {
    if (!std::holds_alternative<StarUnimodalTarget>(spec.target)) {
      throw PreconditionFailed(
          "d > 1 requires a spherically symmetric star-unimodal target");
    }
    if (m.norm() != 0.0) {
      throw PreconditionFailed("spherical targets are centered at m = 0");
    }
  }
  const MomentResult lhs = incr_for_bound(spec, r);
  const double rhs =
      std::pow(2.0 * r / (r + 1.0), r) * absolute_moment(spec.target, r, m);
  return bound_row("unimodal-upper", r, lhs.value, rhs, true, lhs.method,
                   lhs.error + report_eps(lhs.value, rhs));
}

std::vector<BoundReport> corr_reports(const ChainSpec& spec) {
  std::vector<BoundReport> rows;
  const bool walk = is_random_walk(spec.proposal);
  const bool lattice = is_lattice(spec);
  const int d = dimension(spec.target);

  CorrParts parts;
  if (walk) parts = corr_parts(spec);

  // Positivity of the lag-1 total correlation.
  if (!walk) {
    rows.push_back(skipped_row("corr-positive", 2.0,
                               "proposal is not a translation law"));
  } else if (!parts.computable) {
    rows.push_back(skipped_row("corr-positive", 2.0, parts.blocker));
  } else {
    rows.push_back(bound_row("corr-positive", 2.0, 0.0, parts.corr, !lattice,
                             parts.method, parts.error));
  }

  // Unimodal floor 1/9 (continuous, symmetric step, mode = mean).
  {
    std::string why;
    if (!walk) {
      why = "proposal is not a translation law";
    } else if (lattice) {
      why = "lattice target (the integer-grid floor is the 1/10 row)";
    } else if (!is_symmetric(spec.proposal)) {
      why = "step law is not symmetric";
    } else if (d == 1) {
      const double mean = mean_vector(spec.target)(0);
      if (!is_unimodal(spec.target) || !mode_matches(spec.target, mean)) {
        why = "target is not unimodal with mode equal to mean";
      }
    } else if (!std::holds_alternative<StarUnimodalTarget>(spec.target)) {
      why = "d > 1 needs a spherically symmetric star-unimodal target";
    }
    if (!why.empty()) {
      rows.push_back(skipped_row("corr-gt-1/9", 2.0, why));
    } else if (!parts.computable) {
      rows.push_back(skipped_row("corr-gt-1/9", 2.0, parts.blocker));
    } else {
      rows.push_back(bound_row("corr-gt-1/9", 2.0, 1.0 / 9.0, parts.corr, true,
                               parts.method, parts.error));
    }
  }

  // Integer-grid floor 1/10 (symmetric unimodal pmf, symmetric odd steps).
  {
    std::string why;
    if (!walk) {
      why = "proposal is not a translation law";
    } else if (!lattice || d != 1) {
      why = "needs a one-dimensional lattice chain";
    } else if (!is_symmetric(spec.proposal) || !has_odd_support(spec.proposal)) {
      why = "step support must be symmetric and odd";
    } else if (!is_symmetric(spec.target) || !is_unimodal(spec.target)) {
      why = "target must be symmetric and unimodal";
    }
    if (!why.empty()) {
      rows.push_back(skipped_row("corr-ge-1/10-odd-lattice", 2.0, why));
    } else {
      rows.push_back(bound_row("corr-ge-1/10-odd-lattice", 2.0, 0.1,
                               parts.corr, false, parts.method, parts.error));
    }
  }

  // Simple step-moment lower bound 1 - E|Z|^2 / trVar (weak, any walk).
  if (!walk) {
    rows.push_back(skipped_row("corr-simple-lower", 2.0,
                               "proposal is not a translation law"));
  } else if (!parts.computable) {
    rows.push_back(skipped_row("corr-simple-lower", 2.0, parts.blocker));
  } else {
    const double step2 = step_second_moment(spec.proposal);
    const double lower = 1.0 - step2 / parts.var;
    rows.push_back(bound_row("corr-simple-lower", 2.0, lower, parts.corr,
                             false, parts.method,
                             parts.error + report_eps(lower, parts.corr)));
  }
  return rows;
}

std::vector<BoundReport> check_linear_bound(const ChainSpec& spec,
                                            const Vector& c, double r,
                                            double m) {
  if (c.size() != dimension(spec.target)) {
    throw DimensionMismatch("direction c has the wrong dimension");
  }
  if (!is_random_walk(spec.proposal)) {
    throw SupportMismatch("the directional bound needs a translation step law");
  }
  const bool symmetric = is_symmetric(spec.proposal);
  if (!(r >= 2.0 || (r >= 1.0 && symmetric))) {
    throw RangeError(
        "the directional bound needs r >= 2, or r >= 1 with a symmetric step");
  }
  const bool lattice = is_lattice(spec);
  std::vector<BoundReport> rows;

  const MomentResult lhs = incr_moment_linear(spec, c, r);
  const double rhs =
      std::pow(2.0, r - 1.0) * linear_abs_moment(spec.target, c, m, r);
  rows.push_back(bound_row("linear-upper", r, lhs.value, rhs,
                           !lattice && r > 1.0, lhs.method,
                           lhs.error + report_eps(lhs.value, rhs)));

  if (r == 2.0) {
    const double mean_c = c.dot(mean_vector(spec.target));
    const double var_c = linear_abs_moment(spec.target, c, mean_c, 2.0);
    const double cov_c = var_c - lhs.value / 2.0;
    rows.push_back(bound_row("linear-corr-positive", 2.0, 0.0, cov_c, !lattice,
                             lhs.method,
                             lhs.error / 2.0 + report_eps(0.0, cov_c)));
  }
  return rows;
}

BoundReport winkler_check(const Target& target, double y, double r) {
  if (dimension(target) != 1) {
    throw DimensionMismatch("the tail-moment bound is one-dimensional");
  }
  if (is_lattice(target)) {
    throw PreconditionFailed("the tail-moment bound needs a continuous law");
  }
  if (!(r > 0.0)) throw RangeError("the tail-moment bound needs r > 0");
  if (!(y > 0.0)) throw RangeError("the tail threshold must be positive");
  if (!is_unimodal(target) || !mode_matches(target, 0.0)) {
    throw PreconditionFailed("the law must be unimodal about 0");
  }
  const double lhs = std::pow(y, r) * tail_probability(target, y);
  const double rhs = std::pow(r / (r + 1.0), r) * absolute_moment(target, r);

  // Equality holds exactly for uniform mixtures whose pieces all run from 0
  // to +-(r+1)y/r, with arbitrary piece weights.
  std::vector<WeightedInterval> pieces;
  if (const auto* u = std::get_if<UniformIntervalTarget>(&target)) {
    pieces.push_back({u->a, u->b, 1.0});
  } else if (const auto* mix = std::get_if<UniformMixtureTarget>(&target)) {
    pieces = mix->pieces;
  }
  std::string note;
  if (!pieces.empty()) {
    const double far = (r + 1.0) * y / r;
    const double tol = 1e-12 * (1.0 + far);
    bool all_anchored = true;
    for (const auto& piece : pieces) {
      const bool pos = std::abs(piece.lo) <= tol && std::abs(piece.hi - far) <= tol;
      const bool neg = std::abs(piece.hi) <= tol && std::abs(piece.lo + far) <= tol;
      if (!pos && !neg) {
        all_anchored = false;
        break;
      }
    }
    if (all_anchored) {
      note = "equality family: every uniform piece runs from 0 to +-(r+1)y/r";
    }
  }
  const bool uniform_family = !pieces.empty();
  return bound_row("winkler", r, lhs, rhs, false,
                   uniform_family ? "closed-form" : "quadrature",
                   report_eps(lhs, rhs) + (uniform_family ? 0.0 : 1e-10),
                   note);
}

std::vector<BoundReport> even_lag_report(const RationalChain& chain,
                                         const std::vector<int>& lags) {
  if (check_reversibility(chain) > 0.0) {
    throw NotReversible("kernel violates detailed balance");
  }
  std::vector<BoundReport> rows;
  for (const int t : lags) {
    if (t < 0 || t % 2 != 0) {
      throw RangeError("even-lag positivity is stated for even lags only");
    }
    const ExactLagStats<Rational> stats = exact_lag_stats(chain, t, {});
    const double cov = to_double(stats.tr_cov);
    BoundReport rep =
        bound_row("even-lag-nonneg", 2.0, 0.0, cov, false, "exact",
                  1e-15 * (1.0 + std::abs(cov)));
    rep.lag = t;
    rep.pass = stats.tr_cov >= 0;  // exact sign, no rounding
    rows.push_back(rep);

    if (t == 2) {
      const Rational cond = conditional_mean_trvar(chain);
      const Rational diff = stats.tr_cov - cond;
      BoundReport id =
          bound_row("lag2-total-cov", 2.0, to_double(cond), cov, false,
                    "exact", 0.0, "identity: trCov at lag 2 = trVar(E[X_1|X_0])");
      id.lag = t;
      id.margin = to_double(diff);
      id.pass = (diff == 0);
      rows.push_back(id);
    }
  }
  return rows;
}

RhoNormal normal_example_rho(double r, double step_sd) {
  if (!(r > 0.0)) throw RangeError("rho is defined for r > 0");
  if (!(step_sd > 0.0)) throw RangeError("the step deviation must be positive");
  RhoNormal out;
  out.r = r;

  // rho = num / den with den = 2^r Gamma((r+1)/2) / sqrt(pi), the r-th
  // absolute moment of the difference of two independent standard normals.
  // The denominator is folded into the integrand through logarithms so the
  // ratio stays representable for large r.
  const double ln_den =
      r * std::log(2.0) + std::lgamma((r + 1.0) / 2.0) - 0.5 * std::log(M_PI);
  const double ln_scale =
      std::log(2.0) - std::log(step_sd) - 0.5 * std::log(2.0 * M_PI) - ln_den;
  const double sd = step_sd;
  auto integrand = [r, sd, ln_scale](double z) {
    if (z <= 0.0) return 0.0;
    const double tail = std::erfc(z / (2.0 * std::sqrt(2.0)));
    if (tail <= 0.0) return 0.0;
    const double ln_val = r * std::log(z) - z * z / (2.0 * sd * sd) +
                          std::log(tail) + ln_scale;
    return std::exp(ln_val);
  };
  const double hi = sd * (std::sqrt(r) + 40.0);
  std::vector<double> pts = {0.0, sd, sd * std::sqrt(r), hi};
  std::sort(pts.begin(), pts.end());
  const QuadResult q = integrate_piecewise(integrand, pts);

  out.rho = q.value;
  out.rho_hat = std::pow(std::sqrt(2.0) * r / (r + 1.0), r);
  out.rho_tilde =
      std::exp(std::lgamma(r / 2.0) - std::lgamma((r + 1.0) / 2.0)) /
      std::sqrt(M_PI);
  out.small_r_bound = std::pow(2.0, (r - 2.0) / 2.0);
  return out;
}

}  // namespace mhb
