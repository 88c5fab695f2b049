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

#ifndef MHBOUNDS_TV_SHIFT_HPP_
#define MHBOUNDS_TV_SHIFT_HPP_

#include <map>
#include <optional>
#include <string>

#include "mhbounds/bound_report.hpp"
#include "mhbounds/distributions.hpp"

namespace mhb {

// Total variation distance between X and X + z when X ~ target:
// d_TV = 1 - integral of min{pi(x), pi(x - z)}. Closed form for gaussians,
// exact overlap for uniform mixtures and lattices, spherical reduction for
// star-unimodal targets, quadrature otherwise.
double tv_shift(const Target& target, const Vector& z);

Rational tv_shift_exact(const LatticeTarget& target, const Eigen::VectorXi& z);

// Weighted overlap of a law with its own shift:
//   integral (or sum) of min{wa * pi(x), wb * pi(x - z)}.
// Closed form for gaussians (single likelihood-ratio crossing), exact sums
// for lattices, spherical reduction for equal weights on star targets,
// piecewise quadrature otherwise. tv_shift(z) = 1 - weighted_overlap(1,1,z).
struct OverlapResult {
  double value = 0.0;
  double error = 0.0;
  std::string method;
};
OverlapResult weighted_overlap(const Target& target, double wa, double wb,
                               const Vector& z);

// Moment lower bound on the weighted overlap of a shift:
//   |z|^r * integral min{phi * pi(x), (1 - phi) * pi(x - z)} dx
//     <= 2^(r-2) * E|X0 - m|^r                       (r >= 2)
// margin = rhs - lhs. When `c` is given both sides use <c, .>: |<c, z>|^r on
// the left and E|<c, X0 - m>|^r on the right.
BoundReport tvlb_margin(const Target& target, double phi, const Vector& z,
                        const Vector& m, double r,
                        const std::optional<Vector>& c = std::nullopt);

// Symmetric-split sharpening: for r >= 1,
//   |z|^r * (1 - d_TV(X0, X0 + z)) <= 2^(r-1) * E|X0 - m|^r,
// strict for continuous laws when r > 1 (for r = 1 one opposite pair +-z can
// attain equality). Same <c, .> variant.
BoundReport tvlb_margin_symm(const Target& target, const Vector& z,
                             const Vector& m, double r,
                             const std::optional<Vector>& c = std::nullopt);

// One residue class of the lattice bound: a finitely supported sequence
// p_n >= 0 with offset b, split weight phi in [0, 1], and order r.
struct SequenceInstance {
  std::map<long, double> p;
  double b = 0.0;
  double phi = 0.5;
  double r = 2.0;
};

// gap = 2^(r-2) * sum |b + n|^r p_n  -  sum min{(1 - phi) p_(n-1), phi p_n}.
// Nonnegative on the proved domain (r >= 2 with any phi, or r >= 1 with
// phi = 1/2); outside it the value is still returned so counterexamples can
// be probed. RangeError for r <= 0 or phi outside [0, 1].
double lemma_gap(const SequenceInstance& inst);

// The positive part 2^(r-2) * sum |b + n|^r p_n, used as the scale for
// relative equality tolerances.
double lemma_scale(const SequenceInstance& inst);

// True when (r, phi) lies in the proved domain of the sequence bound.
bool lemma_in_domain(const SequenceInstance& inst);

enum class EqualityTag {
  kStrict,         // gap > 0
  kAllZero,        // p vanishes identically
  kSingleAtom,     // support {0} with b = 0
  kWeightedPair,   // r = 2, support {-1, 0}, phi = b = p_(-1)/(p_(-1)+p_0)
  kBalancedPair,   // equal masses on {-1, 0}: phi = b = 1/2, or r = 1,
                   // phi = 1/2 with any b in [0, 1)
  kCenteredTriple  // r = 1, phi = 1/2, b = 0, support in {-1, 0, 1} with the
                   // middle mass largest
};

std::string equality_tag_name(EqualityTag tag);

struct EqualityClass {
  EqualityTag tag = EqualityTag::kStrict;
  // Parameters of the matched configuration after shift normalization.
  std::string witness;
};

// Decides whether the gap is zero (relative tolerance 1e-12 against the
// positive part) and, if so, which equality configuration produced it.
// Conditions are checked on the fractional offset b - floor(b) and the
// correspondingly shifted sequence; integer b therefore normalizes to 0.
// Throws RangeError outside the proved domain and ClassificationFailure if a
// zero gap matches no known configuration.
EqualityClass classify_equality(const SequenceInstance& inst);

}  // namespace mhb

#endif  // MHBOUNDS_TV_SHIFT_HPP_
