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

#ifndef MHBOUNDS_BOUNDS_HPP_
#define MHBOUNDS_BOUNDS_HPP_

#include <vector>

#include "mhbounds/bound_report.hpp"
#include "mhbounds/chain.hpp"
#include "mhbounds/exact_oracle.hpp"

namespace mhb {

// E|X_1 - X_0|^r <= 2^(r-1) E|X_0 - m|^r for any center m. Strict for
// continuous targets, attainable with equality on lattices. Needs r >= 2,
// or r >= 1 with a symmetric step law.
BoundReport check_general_bound(const ChainSpec& spec, double r, const Vector& m);

// Unimodal sharpening E|X_1 - X_0|^r < (2r/(r+1))^r E|X_0 - m|^r with m the
// mode (d = 1) or the center of a spherical target. Symmetric steps,
// continuous targets only; the constant is false on lattices.
BoundReport check_unimodal_bound(const ChainSpec& spec, double r, const Vector& m);

// Lag-1 autocorrelation corollaries, each emitted as one row: positivity,
// the 1/9 unimodal floor, the 1/10 odd-step lattice floor, and the simple
// step-moment lower bound 1 - E|Z|^2 / trVar. Rows that do not apply to the
// chain are reported as skipped with the reason in `note`.
std::vector<BoundReport> corr_reports(const ChainSpec& spec);

// Directional bound E|<c, X_1 - X_0>|^r <= 2^(r-1) E|<c, X_0> - m|^r
// (r >= 2), plus the positivity of Cov(<c, X_0>, <c, X_1>) when r = 2.
std::vector<BoundReport> check_linear_bound(const ChainSpec& spec,
                                            const Vector& c, double r,
                                            double m);

// Tail-moment bound y^r P(|Y| > y) <= (r/(r+1))^r E|Y|^r for continuous
// laws that are unimodal about 0. Detects the equality family: uniform
// mixtures whose pieces all run from 0 to +-(r+1)y/r.
BoundReport winkler_check(const Target& target, double y, double r);

// Even lags of a reversible chain: trCov(X_0, X_t) >= 0 for even t, and at
// t = 2 the exact identity trCov = trVar(E[X_1 | X_0]). Throws
// NotReversible if the kernel fails detailed balance and RangeError for odd
// lags.
std::vector<BoundReport> even_lag_report(const RationalChain& chain,
                                         const std::vector<int>& lags);

// Reference curve for the standard normal target with a N(0, sd^2) step:
// rho(r) = E|X_1 - X_0|^r / E|X_0* - X_0|^r against its closed-form
// comparators.
struct RhoNormal {
  double r = 0.0;
  double rho = 0.0;          // quadrature value
  double rho_hat = 0.0;      // (sqrt(2) r / (r+1))^r
  double rho_tilde = 0.0;    // Gamma(r/2) / (sqrt(pi) Gamma((r+1)/2))
  double small_r_bound = 0.0;  // 2^((r-2)/2)
};
RhoNormal normal_example_rho(double r, double step_sd = 2.0);

}  // namespace mhb

#endif  // MHBOUNDS_BOUNDS_HPP_
