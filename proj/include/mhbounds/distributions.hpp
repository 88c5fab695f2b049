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

#ifndef MHBOUNDS_DISTRIBUTIONS_HPP_
#define MHBOUNDS_DISTRIBUTIONS_HPP_

#include <functional>
#include <limits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mhbounds/errors.hpp"
#include "mhbounds/rational.hpp"

namespace mhb {

using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;

// ---------------------------------------------------------------------------
// Target distributions.
//
// Continuous targets are densities on R^d; lattice targets are pmfs with
// finite support on Z^d. d > 1 continuous support is limited to product
// gaussians and spherically symmetric star-unimodal densities, because every
// multi-dimensional computation in this library either factorizes across
// coordinates or reduces to a radial/first-coordinate integral.
// ---------------------------------------------------------------------------

// Gaussian with independent coordinates (diagonal covariance).
struct GaussianTarget {
  Vector mean;
  Vector var;  // per-coordinate variances
};

// Uniform density on [a, b], d = 1.
struct UniformIntervalTarget {
  double a = 0.0;
  double b = 1.0;
};

struct WeightedInterval {
  double lo = 0.0;
  double hi = 1.0;
  double weight = 1.0;  // probability of the piece; weights sum to 1
};

// Finite mixture of uniform intervals, d = 1. Pieces may overlap.
struct UniformMixtureTarget {
  std::vector<WeightedInterval> pieces;
};

struct RadialKnot {
  double radius = 0.0;
  double value = 0.0;
};

// Spherically symmetric star-unimodal density: pi(x) = profile(|x|) with a
// piecewise-linear, nonincreasing radial profile that reaches 0 at the last
// knot. Normalized to unit mass at construction.
struct StarUnimodalTarget {
  int dim = 1;
  std::vector<RadialKnot> profile;
};

// Black-box density on a declared finite window [lo, hi], d = 1. The
// structural flags are trusted as declared by the caller. `tail_decay`
// documents a bound density(x) = O(|x|^-tail_decay) outside the window; the
// default (infinity) means compact support.
struct CustomDensityTarget {
  std::function<double(double)> density;
  double lo = 0.0;
  double hi = 1.0;
  bool symmetric = false;
  bool unimodal = false;
  double mode = 0.0;
  double tail_decay = std::numeric_limits<double>::infinity();
};

// Finite-support pmf on Z^d. `mass` always holds the double values; when the
// pmf was built from rationals, `mass_q` holds them exactly and `exact` is
// true, enabling the exact-arithmetic oracles. Points are unique and sorted
// lexicographically so that samplers and serializers are deterministic.
struct LatticeTarget {
  IntMatrix points;  // n x d
  std::vector<double> mass;
  std::vector<Rational> mass_q;
  bool exact = false;
};

using Target = std::variant<GaussianTarget, UniformIntervalTarget,
                            UniformMixtureTarget, StarUnimodalTarget,
                            CustomDensityTarget, LatticeTarget>;

// Validating constructors. Each checks nonnegativity and unit mass
// (continuous kinds to 1e-8 by quadrature where needed, lattice exactly) and
// throws MassError / PreconditionFailed on violation.
Target make_gaussian(Vector mean, Vector var);
Target make_uniform_interval(double a, double b);
Target make_uniform_mixture(std::vector<WeightedInterval> pieces);
Target make_star_unimodal(int dim, std::vector<RadialKnot> profile);
Target make_custom_density(CustomDensityTarget spec);
Target make_lattice_pmf(IntMatrix points, std::vector<Rational> mass);
Target make_lattice_pmf(IntMatrix points, std::vector<double> mass);
Target make_bernoulli(const Rational& p);     // pmf {0: 1-p, 1: p}
Target make_lattice_uniform(int k);           // uniform on {-k, ..., k}
// Lattice pmf proportional to profile(|x|) over the ball |x| <= cutoff in
// Z^d, profile nonincreasing; these are exactly the radial lattice targets
// the high-dimensional transfer bound applies to.
Target make_lattice_radial(int dim, double cutoff,
                           const std::function<double(double)>& profile);

// ---------------------------------------------------------------------------
// Proposal step distributions (random-walk form q(x, y) = phi(y - x)), plus
// one non-random-walk escape hatch: an explicit finite transition matrix.
// ---------------------------------------------------------------------------

// Mean-zero gaussian step with independent coordinates.
struct GaussianStep {
  Vector sd;  // per-coordinate standard deviations
};

// Uniform step density on [a, b], d = 1.
struct UniformStep {
  double a = -1.0;
  double b = 1.0;
};

// Equal mixture of Unif(center - halfwidth, center + halfwidth) and its
// reflection about 0; d = 1, symmetric by construction.
struct TwoSidedUniformStep {
  double center = 1.0;
  double halfwidth = 0.1;
};

// Finite-support step pmf on Z^d; same exactness convention as LatticeTarget.
struct LatticeStep {
  IntMatrix points;
  std::vector<double> mass;
  std::vector<Rational> mass_q;
  bool exact = false;
};

struct AxisMove {
  int axis = 0;
  long offset = 1;  // odd
  Rational weight = 1;
};

// Steps along coordinate axes by odd offsets: the proposal class of the
// integer-grid transfer theorem.
struct AxisOddStep {
  int dim = 1;
  std::vector<AxisMove> moves;
};

// Continuous axis-aligned steps: pick axis a with probability weight[a], move
// N(0, sd[a]^2) along it. With a product target the acceptance integral
// factorizes into the chosen coordinate's one-dimensional problem.
struct AxisGaussianStep {
  Vector sd;
  Vector weight;
};

// Explicit transition matrix on an enumerated lattice state set (not of
// random-walk form). Needed for chains like the two-state swap example.
struct ExplicitLatticeQ {
  IntMatrix states;  // n x d
  std::vector<std::vector<Rational>> q;  // row-stochastic
};

using Proposal =
    std::variant<GaussianStep, UniformStep, TwoSidedUniformStep, LatticeStep,
                 AxisOddStep, AxisGaussianStep, ExplicitLatticeQ>;

Proposal make_gaussian_step(Vector sd);
Proposal make_uniform_step(double a, double b);
Proposal make_two_sided_uniform_step(double center, double halfwidth);
Proposal make_lattice_step(IntMatrix points, std::vector<Rational> mass);
Proposal make_lattice_step(IntMatrix points, std::vector<double> mass);
Proposal make_axis_odd_step(int dim, std::vector<AxisMove> moves);
Proposal make_axis_gaussian_step(Vector sd, Vector weight);
Proposal make_explicit_q(IntMatrix states, std::vector<std::vector<Rational>> q);

// ---------------------------------------------------------------------------
// Structural queries.
// ---------------------------------------------------------------------------

int dimension(const Target& t);
int dimension(const Proposal& p);
bool is_lattice(const Target& t);
bool is_lattice(const Proposal& p);
bool is_random_walk(const Proposal& p);

// Symmetry about 0 (target) / about 0 (step law), decided structurally.
bool is_symmetric(const Target& t);
bool is_symmetric(const Proposal& p);

// d = 1 unimodality. Continuous: nonincreasing away from a mode. Lattice:
// nondecreasing up to 0 and nonincreasing after. StarUnimodal targets are
// unimodal in every dimension by construction.
bool is_unimodal(const Target& t);
double mode_1d(const Target& t);

// Every support point is an odd integer (d = 1) or an odd multiple of a
// coordinate vector (axis steps).
bool has_odd_support(const Proposal& p);

Vector mean_vector(const Target& t);
double total_mass(const Target& t);  // diagnostic; ~1 for valid targets

// d = 1 continuous density evaluation and its breakpoints (support edges and
// kink locations; for gaussians, a +-9 sigma truncation window whose omitted
// tail mass is below 1e-12).
double density_at(const Target& t, double x);
std::vector<double> target_breakpoints(const Target& t);

// d = 1 continuous step density and breakpoints.
double step_density(const Proposal& p, double z);
std::vector<double> step_breakpoints(const Proposal& p);

// E|Z|^2 of the step law (any dimension); used by the simple correlation
// lower bound.
double step_second_moment(const Proposal& p);

// ---------------------------------------------------------------------------
// Moments, tails, symmetrization.
// ---------------------------------------------------------------------------

// E|X - m|^r (d = 1) or E|X - m|^r with the Euclidean norm (d >= 1).
// Continuous kinds use exact piecewise integration where the density is
// polynomial and adaptive quadrature otherwise; lattice kinds sum exactly.
// Throws NonIntegrable when the declared tail decay admits no rth moment.
double absolute_moment(const Target& t, double r, const Vector& m);
double absolute_moment(const Target& t, double r);  // m = 0

// Exact lattice moment: requires integer r, and for d > 1 even r (so that
// |x - m|^r is rational). `m` must be rational.
Rational absolute_moment_exact(const LatticeTarget& t, unsigned r,
                               const std::vector<Rational>& m);

// E|<c, X> - m|^r for a direction c and scalar offset m. Reduces to a 1-d
// moment: scaling for d = 1, the exact law of <c, X> for gaussians and
// lattices, and the first-coordinate marginal for spherical targets (m = 0
// only there). Throws ZeroVector when c = 0.
double linear_abs_moment(const Target& t, const Vector& c, double m, double r);

// P(|X| > t) for d = 1 targets (exact for uniform/lattice kinds, closed form
// for gaussians). Throws DimensionMismatch for d > 1.
double tail_probability(const Target& t, double t_value);
Rational tail_probability_exact(const LatticeTarget& t, const Rational& t_value);

// P(|X_01| > t) where X_01 is the first coordinate of a spherically
// symmetric star-unimodal vector; the reduction used by all d > 1 bounds.
double marginal_tail(const StarUnimodalTarget& t, double t_value);

// Density value of a star-unimodal target at radius rho (piecewise linear
// interpolation of the normalized profile; 0 beyond the last knot).
double star_density(const StarUnimodalTarget& t, double rho);

// Reflection averages: pi_bar(x) = (pi(x) + pi(-x)) / 2, same for phi. Mass
// is preserved exactly; the result reports symmetric.
Target symmetrize_target(const Target& t);
Proposal symmetrize_proposal(const Proposal& p);

// Looks up a lattice point; returns -1 if absent.
long find_point(const IntMatrix& points, const Eigen::VectorXi& x);

}  // namespace mhb

#endif  // MHBOUNDS_DISTRIBUTIONS_HPP_
