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

#include "mhbounds/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "mhbounds/chain.hpp"
#include "mhbounds/moment_formulas.hpp"

namespace mhb {
namespace {

constexpr long double kLn2 = 0.69314718055994530941723212145817656808L;
constexpr long double kLn3 = 1.09861228866810969139524523692252570465L;

// Below this r the certified window is k_tail and the peak sits at k = 2.
constexpr double kSmallGapEdge = 1.043;

// Incremental evaluation of ln S(k; r). The scaled tail T(k) = S(k) / k^r
// obeys T(k) = T(k-1) ((k-1)/k)^r + 1 and stays in [1, k], so the recurrence
// never overflows and loses at most ~k units in the last place.
struct LnPowerSum {
  double r = 1.0;
  long k = 0;
  long double t = 0.0L;
  long double ln = 0.0L;

  void advance() {
    ++k;
    if (k == 1) {
      t = 1.0L;
      ln = 0.0L;
      return;
    }
    const long double ratio =
        static_cast<long double>(k - 1) / static_cast<long double>(k);
    t = t * powl(ratio, static_cast<long double>(r)) + 1.0L;
    ln = static_cast<long double>(r) * logl(static_cast<long double>(k)) +
         logl(t);
  }

  void advance_to(long target) {
    while (k < target) advance();
  }
};

long double ln_f(long k, long y, double r, long double ln_s) {
  return static_cast<long double>(r) * logl(static_cast<long double>(2 * y + 1)) +
         logl(static_cast<long double>(k - y)) - ln_s;
}

// ln f1(k; r) = ln(r^r / (2 (r+1)^{r+1})) + (r+1) ln(2k+1) - ln S(k; r).
long double ln_f1(long k, double r, long double ln_s) {
  const long double rl = r;
  return rl * logl(rl) - (rl + 1.0L) * logl(rl + 1.0L) - kLn2 +
         (rl + 1.0L) * logl(static_cast<long double>(2 * k + 1)) - ln_s;
}

void check_k(long k) {
  if (k < 1) throw RangeError("the band half-width k must be at least 1");
}

void check_r(double r) {
  if (!(r > 0.0)) throw RangeError("the moment order r must be positive");
}

struct Best {
  long double ln = -std::numeric_limits<long double>::infinity();
  long k = 1;
  long y = 0;
};

// Largest f(k, y; r) over integer y for one k, trying the edge and the two
// integers around the continuous maximizer y* = (2rk - 1) / (2(r + 1)).
void scan_one_k(long k, double r, long double ln_s, Best* best) {
  const double y_star = (2.0 * r * static_cast<double>(k) - 1.0) / (2.0 * (r + 1.0));
  long candidates[3] = {k - 1, static_cast<long>(std::floor(y_star)),
                        static_cast<long>(std::floor(y_star)) + 1};
  for (long y : candidates) {
    y = std::clamp(y, 0L, k - 1);
    const long double v = ln_f(k, y, r, ln_s);
    if (v > best->ln) {
      best->ln = v;
      best->k = k;
      best->y = y;
    }
  }
}

}  // namespace

double power_sum(long k, double r) {
  check_k(k);
  check_r(r);
  LnPowerSum s{r};
  s.advance_to(k);
  return static_cast<double>(expl(s.ln));
}

Rational power_sum_exact(long k, unsigned r) {
  check_k(k);
  Rational sum = 0;
  for (long i = 1; i <= k; ++i) {
    sum += rational_pow(Rational(i), r);
  }
  return sum;
}

double g_ratio(long k, double r) {
  check_k(k);
  check_r(r);
  LnPowerSum s{r};
  s.advance_to(k);
  return static_cast<double>(
      expl(static_cast<long double>(r) * logl(static_cast<long double>(2 * k - 1)) -
           s.ln));
}

Rational g_ratio_exact(long k, unsigned r) {
  check_k(k);
  return rational_pow(Rational(2 * k - 1), r) / power_sum_exact(k, r);
}

double f_ratio(long k, long y, double r) {
  check_k(k);
  check_r(r);
  if (y < 0 || y > k - 1) {
    throw RangeError("the step index y must satisfy 0 <= y <= k - 1");
  }
  LnPowerSum s{r};
  s.advance_to(k);
  return static_cast<double>(expl(ln_f(k, y, r, s.ln)));
}

double f1_envelope(long k, double r) {
  check_k(k);
  check_r(r);
  LnPowerSum s{r};
  s.advance_to(k);
  return static_cast<double>(expl(ln_f1(k, r, s.ln)));
}

Thresholds thresholds(double r) {
  check_r(r);
  Thresholds th;

  // k_edge = floor(1/2 + (1 - 2^{-1/r})^{-1}).
  const long double denom = -expm1l(-kLn2 / static_cast<long double>(r));
  th.k_edge = static_cast<long>(floorl(0.5L + 1.0L / denom));

  if (r > 1.0) {
    const long double gap = static_cast<long double>(r) - 1.0L;
    const long double e2 = kLn3 / gap;
    if (e2 > 11000.0L) {
      // 3^{1/(r-1)} overflows long double; the ratio tends to 3/2, so the
      // ceiling is 2 throughout this regime.
      th.k_peak = 2;
    } else {
      const long double num = expm1l(kLn3 + e2);  // 3^{r/(r-1)} - 1
      const long double den = expm1l(e2);         // 3^{1/(r-1)} - 1
      th.k_peak = static_cast<long>(ceill(num / (2.0L * den)));
    }
    th.k_rise = static_cast<long>(ceill(gap / kLn3)) + 1;

    // k_tail: f1(k; r) <= g(2; r) once 1/(2k) <= inner^{1/(r+1)} - 1 with
    // inner = (3(r+1)/(2r))^r / (2^r + 1); positive only for 1 < r <~ 2.14.
    const long double rl = r;
    const long double ln_inner =
        rl * logl(3.0L * (rl + 1.0L) / (2.0L * rl)) -
        (rl * kLn2 + log1pl(expl(-rl * kLn2)));
    const long double brace = expm1l(ln_inner / (rl + 1.0L));
    if (brace > 0.0L) {
      th.k_tail = static_cast<long>(floorl(0.5L / brace));
    }
  }
  return th;
}

ExtremalResult s_of_r(double r) {
  check_r(r);
  ExtremalResult out;
  out.r = r;
  out.cuts = thresholds(r);
  if (r <= 1.0) {
    // f(k, y; r) <= 1 with equality at (1, 0).
    out.value = 1.0;
    out.log_value = 0.0;
    out.argmax_k = 1;
    out.argmax_y = 0;
    out.branch = Branch::kUnit;
    return out;
  }
  out.branch = r < kSmallGapEdge ? Branch::kSmallGap : Branch::kMain;

  long k_hi = std::max(out.cuts.k_edge, out.cuts.k_peak.value_or(1) + 2);
  if (out.cuts.k_tail) k_hi = std::max(k_hi, *out.cuts.k_tail);
  if (k_hi > 20'000'000) {
    throw RangeError(
        "r is too close to 1: the certification scan would exceed 2e7 terms");
  }

  Best best;
  LnPowerSum sum{r};
  for (int rounds = 0;; ++rounds) {
    while (sum.k < k_hi) {
      sum.advance();
      scan_one_k(sum.k, r, sum.ln, &best);
    }
    // Tail certificate: f(k, y) <= f1(k) <= f1(k_hi + 1) for all k > k_hi,
    // and the envelope is nonincreasing in k.
    LnPowerSum probe = sum;
    probe.advance();
    if (ln_f1(probe.k, r, probe.ln) <= best.ln + 1e-15L) break;
    if (rounds >= 40) {
      throw PatternViolation(
          "the envelope never fell below the scanned maximum");
    }
    k_hi *= 2;
  }

  out.log_value = static_cast<double>(best.ln);
  out.value = static_cast<double>(expl(best.ln));
  out.argmax_k = best.k;
  out.argmax_y = best.y;
  return out;
}

ExactExtremal s_of_r_exact(unsigned r) {
  if (r == 0) throw RangeError("the moment order r must be positive");
  ExactExtremal out;
  if (r == 1) return out;  // s(1) = 1 at (1, 0)

  // Same certified window as the floating-point scan.
  const ExtremalResult guide = s_of_r(static_cast<double>(r));
  long k_hi = std::max(guide.cuts.k_edge, guide.cuts.k_peak.value_or(1) + 2);
  if (guide.cuts.k_tail) k_hi = std::max(k_hi, *guide.cuts.k_tail);
  k_hi = std::max(k_hi, guide.argmax_k);

  Rational best = -1;
  Rational sum = 0;
  for (long k = 1; k <= k_hi; ++k) {
    sum += rational_pow(Rational(k), r);
    const long num = 2 * static_cast<long>(r) * k - 1;
    const long den = 2 * (static_cast<long>(r) + 1);
    std::vector<long> candidates = {k - 1, num / den, num / den + 1};
    for (long y : candidates) {
      y = std::clamp(y, 0L, k - 1);
      const Rational f =
          rational_pow(Rational(2 * y + 1), r) * Rational(k - y) / sum;
      if (f > best) {
        best = f;
        out.argmax_k = k;
        out.argmax_y = y;
      }
    }
  }
  out.value = best;
  return out;
}

BruteResult brute_force_s(double r, long k_max) {
  check_r(r);
  check_k(k_max);
  Best best;
  LnPowerSum sum{r};
  for (long k = 1; k <= k_max; ++k) {
    sum.advance();
    for (long y = 0; y < k; ++y) {
      const long double v = ln_f(k, y, r, sum.ln);
      if (v > best.ln) {
        best.ln = v;
        best.k = k;
        best.y = y;
      }
    }
  }
  BruteResult out;
  out.log_value = static_cast<double>(best.ln);
  out.value = static_cast<double>(expl(best.ln));
  out.argmax_k = best.k;
  out.argmax_y = best.y;
  return out;
}

void unimodality_check(double r, long k_max) {
  check_r(r);
  check_k(k_max);
  LnPowerSum sum{r};
  for (long k = 1; k <= k_max; ++k) {
    sum.advance();
    bool rising = true;
    long double prev = ln_f(k, 0, r, sum.ln);
    for (long y = 1; y < k; ++y) {
      const long double cur = ln_f(k, y, r, sum.ln);
      const long double tol = 1e-16L * (1.0L + fabsl(cur));
      if (cur > prev + tol) {
        if (!rising) {
          std::ostringstream msg;
          msg << "f(k, .; r) rises again after falling at k = " << k
              << ", y = " << y << ", r = " << r;
          throw PatternViolation(msg.str());
        }
      } else if (cur < prev - tol) {
        rising = false;
      }
      prev = cur;
    }
  }
}

double lemma_h_margin(double t, double a, double r) {
  check_r(r);
  if (t < 0.0 || a < 0.0) {
    throw RangeError("the product inequality needs t >= 0 and a >= 0");
  }
  const long double tl = t;
  const long double al = a;
  const long double rl = r;
  const auto base = [&](long double c) { return 1.0L + (c + al) * tl; };
  const long double lead_hi = powl(base(3.0L), rl);
  const long double lead_lo = powl(base(1.0L), rl);
  const long double span_lo = powl(base(2.0L), rl + 1.0L) - powl(base(0.0L), rl + 1.0L);
  const long double span_hi = powl(base(4.0L), rl + 1.0L) - powl(base(2.0L), rl + 1.0L);
  return static_cast<double>(lead_hi * span_lo - lead_lo * span_hi);
}

BoundReport highdim_check(const LatticeTarget& target, const Proposal& step,
                          double r) {
  check_r(r);
  const int d = static_cast<int>(target.points.cols());
  if (dimension(step) != d) {
    throw DimensionMismatch("target and step live in different dimensions");
  }
  if (!is_random_walk(step)) {
    throw SupportMismatch("the transfer bound needs a translation step law");
  }
  if (!is_symmetric(step) || !has_odd_support(step)) {
    throw PreconditionFailed(
        "the transfer bound needs symmetric odd steps along coordinate axes");
  }

  // Radial validation: mass must be a nonincreasing function of |x| and the
  // support must be a full lattice ball around the origin.
  std::map<long, double> by_norm;
  long max_sq = 0;
  for (long i = 0; i < target.points.rows(); ++i) {
    const long sq = target.points.row(i).cast<long>().squaredNorm();
    max_sq = std::max(max_sq, sq);
    const auto [it, fresh] = by_norm.emplace(sq, target.mass[i]);
    if (!fresh && std::abs(it->second - target.mass[i]) >
                      1e-12 * (1.0 + std::abs(it->second))) {
      throw PatternViolation("pmf is not constant on lattice spheres");
    }
  }
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& [sq, mass] : by_norm) {
    if (mass > prev * (1.0 + 1e-12) + 1e-15) {
      throw PatternViolation("pmf is not nonincreasing in the radius");
    }
    prev = mass;
  }
  if (by_norm.find(0) == by_norm.end()) {
    throw PatternViolation("a radial nonincreasing pmf must charge the origin");
  }
  const long radius = static_cast<long>(std::floor(std::sqrt(
      static_cast<double>(max_sq) + 0.5)));
  double box = 1.0;
  for (int j = 0; j < d; ++j) box *= static_cast<double>(2 * radius + 1);
  if (box > 5e6) {
    throw PreconditionFailed("radial validation window is too large");
  }
  Eigen::VectorXi z = Eigen::VectorXi::Constant(d, static_cast<int>(-radius));
  for (;;) {
    if (z.cast<long>().squaredNorm() <= max_sq && find_point(target.points, z) < 0) {
      throw PatternViolation("support is not a full lattice ball");
    }
    int axis = 0;
    while (axis < d && z(axis) == radius) {
      z(axis) = static_cast<int>(-radius);
      ++axis;
    }
    if (axis == d) break;
    ++z(axis);
  }

  const double moment = absolute_moment(Target(target), r);
  if (moment == 0.0) {
    throw PreconditionFailed(
        "target is a point mass at the origin; the ratio is undefined");
  }

  const ChainSpec spec = make_chain(Target(target), step);
  const MomentResult incr = incr_moment_rwmh(spec, r);
  const ExtremalResult s = s_of_r(r);
  const double rhs = s.value * moment;

  BoundReport rep;
  rep.theorem_id = "extremal-transfer";
  rep.r = r;
  rep.lhs = incr.value;
  rep.rhs = rhs;
  rep.margin = rhs - rep.lhs;
  rep.strict_expected = false;  // equality at the extremal pairs
  rep.method = incr.method;
  rep.error_bound =
      incr.error + 1e-12 * (1.0 + std::abs(rep.lhs) + std::abs(rhs));
  rep.pass = bound_pass(rep.margin, rep.error_bound);
  return rep;
}

}  // namespace mhb
