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

#ifndef MHBOUNDS_MOMENT_FORMULAS_HPP_
#define MHBOUNDS_MOMENT_FORMULAS_HPP_

#include <functional>
#include <string>
#include <vector>

#include "mhbounds/chain.hpp"
#include "mhbounds/distributions.hpp"
#include "mhbounds/quadrature.hpp"

namespace mhb {

struct MomentResult {
  double value = 0.0;
  std::string method;  // "closed-form", "exact", "sum", "quadrature"
  double error = 0.0;  // certified numerical error estimate
};

// A general d = 1 proposal density q(x, y) with the y-breakpoints of its
// support given the current point x.
struct GeneralQ {
  std::function<double(double, double)> density;
  std::function<std::vector<double>(double)> breakpoints;
};

GeneralQ random_walk_q(const Proposal& step);
GeneralQ independence_q(const Target& draw_law);

// E|X_1 - X_0|^r for stationary MH with an arbitrary proposal density:
//   double integral of |x - y|^r min{pi(x) q(x, y), pi(y) q(y, x)}.
MomentResult incr_moment_mh(const Target& target, const GeneralQ& q, double r,
                            double tol = kDefaultTol);

// Random-walk specialization: the inner integral collapses to the weighted
// overlap of pi with its shift by z, integrated against |z|^r over the step
// law. Lattice chains are summed exactly.
MomentResult incr_moment_rwmh(const ChainSpec& spec, double r,
                              double tol = kDefaultTol);
Rational incr_moment_rwmh_exact(const LatticeTarget& target,
                                const Proposal& step, unsigned r);

// Symmetric-step form E phi-avg of |z|^r (1 - d_TV(X_0, X_0 + z)).
// Throws NotSymmetric when the step law is not symmetric about 0.
MomentResult incr_moment_rwmh_symm(const ChainSpec& spec, double r,
                                   double tol = kDefaultTol);

// Symmetric unimodal targets about 0 (d = 1): E|Z|^r P(|X_0| > |Z|/2) for
// continuous chains; for lattice chains the step must have odd support and
//   E|X_1 - X_0|^r = 2 sum_{y >= 0} phi(2y+1) (2y+1)^r P(|X_0| > y).
MomentResult incr_moment_symm_unimodal(const ChainSpec& spec, double r,
                                       double tol = kDefaultTol);
Rational incr_moment_symm_unimodal_exact(const LatticeTarget& target,
                                         const Proposal& step, unsigned r);

// E|<c, X_1 - X_0>|^r along a fixed direction c.
MomentResult incr_moment_linear(const ChainSpec& spec, const Vector& c,
                                double r, double tol = kDefaultTol);

// Total covariance and correlation at lag 1 through the increment identity
//   trCov = trVar - E|X_1 - X_0|^2 / 2,
// which is exact for stationary reversible chains.
double trace_cov_rwmh(const ChainSpec& spec);
double trace_corr_rwmh(const ChainSpec& spec);

// Increment-moment inflation when the target (alpha) or the step law (beta)
// is replaced by its reflection average:
//   alpha = incr(pi_bar, phi) / incr(pi, phi),
//   beta  = incr(pi, phi_bar) / incr(pi, phi).
// Either factor may be infinity (zero denominator, positive numerator). A
// factor whose numerator and denominator both vanish is NaN (that
// replacement carries no ratio); BothZero is thrown only when the base and
// both symmetrized chains all have vanishing increments.
struct SymmetrizationFactors {
  double alpha = 1.0;
  double beta = 1.0;
};
SymmetrizationFactors symmetrization_factors(const Target& target,
                                             const Proposal& step, double r);

// Two-point Bernoulli(p) chains with step +1 w.p. theta, -1 otherwise, tuned
// so that the symmetrization factor hits a prescribed value (any r > 0).
struct TwoPointExample {
  ChainSpec chain;
  double p = 0.0;
  double theta = 0.0;
};
TwoPointExample construct_alpha_example(double alpha);
TwoPointExample construct_beta_example(double beta);

}  // namespace mhb

#endif  // MHBOUNDS_MOMENT_FORMULAS_HPP_
