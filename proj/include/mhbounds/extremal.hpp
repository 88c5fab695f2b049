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

#ifndef MHBOUNDS_EXTREMAL_HPP_
#define MHBOUNDS_EXTREMAL_HPP_

#include <optional>

#include "mhbounds/bound_report.hpp"
#include "mhbounds/distributions.hpp"

namespace mhb {

// The extremal family behind the lattice transfer constant: the chain with
// uniform target on {-k, ..., k} and step +-(2y+1) realizes the increment /
// moment ratio
//   f(k, y; r) = (2y+1)^r (k - y) / S(k; r),   S(k; r) = sum_{i=1}^k i^r,
// and the optimal constant is s(r) = sup f over k >= 1, 0 <= y <= k - 1.
// Taking the largest step y = k - 1 gives g(k; r) = (2k-1)^r / S(k; r).
// All evaluations run in long-double log space, so they neither overflow nor
// lose the tiny gaps (~1e-6 relative near r = 80) that decide the argmax.

double power_sum(long k, double r);
Rational power_sum_exact(long k, unsigned r);

// g(k; r) = (2k-1)^r / S(k; r).
double g_ratio(long k, double r);
Rational g_ratio_exact(long k, unsigned r);

// f(k, y; r) for integer 0 <= y <= k - 1.
double f_ratio(long k, long y, double r);

// Envelope over continuous y: f1(k; r) = max_{y real} f(k, y; r)
//   = (r^r / (2 (r+1)^{r+1})) (2k+1)^{r+1} / S(k; r),
// attained at y* = (2rk - 1) / (2(r + 1)). Nonincreasing in k with limit
// (2r/(r+1))^r, which is how the scan over k is cut off.
double f1_envelope(long k, double r);

// Index thresholds of the k-scan, all derived in closed form from r.
struct Thresholds {
  // Largest k for which the integer inner maximum of f(k, .; r) sits at the
  // edge y = k - 1: floor(1/2 + (1 - 2^{-1/r})^{-1}). Defined for all r > 0.
  long k_edge = 1;
  // ceil((3^{r/(r-1)} - 1) / (2 (3^{1/(r-1)} - 1))), r > 1. The sequence
  // g(k; r) is nonincreasing from this index on, so the argmax is at most
  // k_peak; at many r (including 80.1) the argmax equals k_peak.
  std::optional<long> k_peak;
  // ceil((r-1)/ln 3) + 1, r > 1. g is strictly increasing below k_rise - 1,
  // so the argmax is at least k_rise - 1.
  std::optional<long> k_rise;
  // floor of the smallest window size whose envelope certificate applies:
  // scanning k <= k_tail and bounding the tail by f1(k_tail + 1) <= g(2; r)
  // closes the search. Defined when the bracket is positive (1 < r <~ 2.14).
  std::optional<long> k_tail;
};
Thresholds thresholds(double r);

// Which regime the optimizer ran in: r <= 1 (the ratio is identically
// dominated by 1), the narrow gap 1 < r < 1.043 where the certified window
// is k_tail, or the main regime with the k_peak window.
enum class Branch { kUnit, kSmallGap, kMain };

struct ExtremalResult {
  double r = 0.0;
  double value = 0.0;      // s(r); +inf if it exceeds double range
  double log_value = 0.0;  // ln s(r), always finite
  long argmax_k = 1;
  long argmax_y = 0;
  Branch branch = Branch::kUnit;
  Thresholds cuts;
};

// Certified evaluation of s(r): scans the threshold window (extending it
// until the envelope at the boundary falls below the running maximum) and
// returns the maximizer. Throws RangeError for r <= 0 or r so close to 1
// that the certification window exceeds 2e7 indices, and PatternViolation
// if the envelope never closes the scan (impossible if the theory holds).
ExtremalResult s_of_r(double r);

struct ExactExtremal {
  Rational value = 1;
  long argmax_k = 1;
  long argmax_y = 0;
};

// Same scan in exact rational arithmetic for integer r; s(2) = 9/5 exactly.
ExactExtremal s_of_r_exact(unsigned r);

struct BruteResult {
  double value = 0.0;
  double log_value = 0.0;
  long argmax_k = 1;
  long argmax_y = 0;
};

// Exhaustive maximum of f(k, y; r) over k <= k_max, all y. O(k_max^2).
BruteResult brute_force_s(double r, long k_max);

// Verifies that y -> f(k, y; r) rises then falls (single peak) for every
// k <= k_max; throws PatternViolation naming the first offending pair.
void unimodality_check(double r, long k_max);

// Margin of the product inequality behind the peak-location argument:
//   h(t, a; r) = (1+(3+a)t)^r ((1+(2+a)t)^{r+1} - (1+at)^{r+1})
//              - (1+(1+a)t)^r ((1+(4+a)t)^{r+1} - (1+(2+a)t)^{r+1}),
// nonnegative for r >= 1, t >= 0, a >= 0, and identically 0 at r = 1.
double lemma_h_margin(double t, double a, double r);

// Transfer bound on Z^d: for a radial nonincreasing pmf (a full lattice
// ball) with symmetric odd axis steps, E|X_1 - X_0|^r <= s(r) E|X_0|^r.
// Validates the radial structure and throws PreconditionFailed when the
// target is a point mass at the origin (the ratio is undefined there).
BoundReport highdim_check(const LatticeTarget& target, const Proposal& step,
                          double r);

}  // namespace mhb

#endif  // MHBOUNDS_EXTREMAL_HPP_
