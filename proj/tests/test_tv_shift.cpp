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

#include <cmath>
#include <random>

#include <doctest.h>

#include "mhbounds/distributions.hpp"
#include "mhbounds/errors.hpp"
#include "mhbounds/tv_shift.hpp"

using namespace mhb;

namespace {

Vector vec1(double x) {
  Vector v(1);
  v << x;
  return v;
}

double normal_phi_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_SUITE("tv-shift") {

TEST_CASE("gaussian shift distance closed form") {
  const Target t = make_gaussian(Vector::Zero(1), Vector::Ones(1));
  for (double z : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double want = 2.0 * normal_phi_cdf(z / 2.0) - 1.0;
    CHECK(std::abs(tv_shift(t, vec1(z)) - want) <= 1e-9 * (1.0 + want));
  }
  CHECK(tv_shift(t, vec1(0.0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("shift distance is symmetric in the shift") {
  std::vector<Target> targets;
  targets.push_back(make_gaussian(Vector::Zero(1), Vector::Ones(1)));
  targets.push_back(make_uniform_interval(-1.0, 3.0));
  targets.push_back(make_uniform_mixture({{-2.0, -1.0, 0.3}, {0.5, 2.0, 0.7}}));
  for (const Target& t : targets) {
    for (double z : {0.3, 0.8, 1.7}) {
      CHECK(std::abs(tv_shift(t, vec1(z)) - tv_shift(t, vec1(-z))) <= 1e-10);
    }
  }
}

TEST_CASE("uniform interval shift distance is min(1, |z| / length)") {
  const Target t = make_uniform_interval(0.0, 1.0);
  CHECK(std::abs(tv_shift(t, vec1(0.3)) - 0.3) <= 1e-9);
  CHECK(std::abs(tv_shift(t, vec1(-0.7)) - 0.7) <= 1e-9);
  CHECK(std::abs(tv_shift(t, vec1(2.0)) - 1.0) <= 1e-12);
}

TEST_CASE("lattice shift distance is an exact rational") {
  const Target t = make_lattice_uniform(2);
  const auto& lt = std::get<LatticeTarget>(t);
  Eigen::VectorXi z(1);
  z << 1;
  CHECK(tv_shift_exact(lt, z) == Rational(1, 5));
  z << 5;
  CHECK(tv_shift_exact(lt, z) == Rational(1));
  z << 0;
  CHECK(tv_shift_exact(lt, z) == Rational(0));
}

TEST_CASE("weighted overlap reduces to the shift distance") {
  const Target t = make_gaussian(Vector::Zero(1), Vector::Ones(1));
  for (double z : {0.4, 1.3}) {
    const OverlapResult ov = weighted_overlap(t, 1.0, 1.0, vec1(z));
    CHECK(std::abs((1.0 - ov.value) - tv_shift(t, vec1(z))) <= 1e-9);
  }
  const OverlapResult at_zero = weighted_overlap(t, 1.0, 1.0, vec1(0.0));
  CHECK(at_zero.value == doctest::Approx(1.0).epsilon(1e-10));
  // Asymmetric weights: overlap of min(0.25 pi, 0.75 pi) = 0.25 at z = 0.
  const OverlapResult skew = weighted_overlap(t, 0.25, 0.75, vec1(0.0));
  CHECK(skew.value == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("shift moment bound holds on gaussians and mixtures") {
  std::vector<Target> targets;
  targets.push_back(make_gaussian(Vector::Zero(1), Vector::Ones(1)));
  targets.push_back(make_uniform_mixture({{-2.0, -1.0, 0.5}, {1.0, 2.0, 0.5}}));
  for (const Target& t : targets) {
    const Vector m = mean_vector(t);
    for (double r : {2.0, 2.5, 4.0}) {
      for (double z : {0.5, 1.0, 2.0, 3.5}) {
        const BoundReport rep = tvlb_margin(t, 0.5, vec1(z), m, r);
        CHECK(rep.pass);
        CHECK(rep.margin >= -rep.error_bound);
      }
    }
    for (double r : {1.0, 1.5, 1.9}) {
      for (double z : {0.5, 2.0}) {
        const BoundReport rep = tvlb_margin_symm(t, vec1(z), m, r);
        CHECK(rep.pass);
      }
    }
  }
}

TEST_CASE("symmetric-split bound is attained by one opposite pair at r = 1") {
  // Two narrow blocks at -1 and +1 shifted by z = 2: the shifted block lands
  // exactly on the other one, so |z| (1 - tv) = 2 * (1/2) = 1 = E|X|.
  const double h = 0.125;
  const Target t = make_uniform_mixture({{-1.0 - h, -1.0 + h, 0.5}, {1.0 - h, 1.0 + h, 0.5}});
  const BoundReport rep = tvlb_margin_symm(t, vec1(2.0), Vector::Zero(1), 1.0);
  CHECK(rep.pass);
  CHECK(std::abs(rep.margin) <= 1e-9 * (1.0 + std::abs(rep.rhs)));
  CHECK(!rep.strict_expected);
}

TEST_CASE("directional shift bound in two dimensions") {
  const Target t = make_gaussian(Vector::Zero(2), Vector::Ones(2));
  Vector z(2), c(2);
  z << 1.0, 0.5;
  c << 1.0, 0.0;
  const BoundReport rep = tvlb_margin(t, 0.5, z, Vector::Zero(2), 2.0, c);
  CHECK(rep.pass);
  CHECK_THROWS_AS(tvlb_margin(t, 0.5, vec1(1.0), Vector::Zero(2), 2.0), DimensionMismatch);
}

TEST_CASE("sequence bound gap is nonnegative on the proved domain") {
  std::mt19937_64 rng(0x5eedu);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> span_dist(1, 6);
  std::uniform_int_distribution<long> base_dist(-3, 3);
  for (int it = 0; it < 2000; ++it) {
    SequenceInstance inst;
    const int span = span_dist(rng);
    const long base = base_dist(rng);
    for (int i = 0; i < span; ++i) {
      if (unit(rng) < 0.2) continue;  // holes are allowed
      inst.p[base + i] = unit(rng);
    }
    inst.b = (unit(rng) - 0.5) * 2.0;
    if (it % 2 == 0) {
      inst.r = 2.0 + 4.0 * unit(rng);
      inst.phi = unit(rng);
    } else {
      inst.r = 1.0 + unit(rng) * 0.999;
      inst.phi = 0.5;
    }
    REQUIRE(lemma_in_domain(inst));
    const double gap = lemma_gap(inst);
    const double scale = lemma_scale(inst);
    CHECK(gap >= -1e-12 * scale);
    // The tie test is relative to the positive part (the gap is homogeneous
    // in p), matching the classifier's own threshold.
    if (gap <= 1e-12 * scale) {
      CHECK(classify_equality(inst).tag != EqualityTag::kStrict);
    }
  }
}

TEST_CASE("sequence bound gap is invariant under index shifts") {
  SequenceInstance inst;
  inst.p = {{-1, 0.4}, {0, 0.3}, {2, 0.3}};
  inst.b = 0.7;
  inst.phi = 0.35;
  inst.r = 2.5;
  const double gap = lemma_gap(inst);
  for (long shift : {-3L, 2L, 11L}) {
    SequenceInstance moved;
    for (const auto& [n, w] : inst.p) moved.p[n + shift] = w;
    moved.b = inst.b - static_cast<double>(shift);
    moved.phi = inst.phi;
    moved.r = inst.r;
    CHECK(std::abs(lemma_gap(moved) - gap) <= 1e-10 * (1.0 + std::abs(gap)));
  }
}

TEST_CASE("equality families classify correctly") {
  // Weighted adjacent pair with (1 - phi) p_{n-1} = phi p_n and matched
  // offsets.
  const SequenceInstance weighted{{{-1, 0.3}, {0, 0.7}}, 0.3, 0.3, 2.0};
  CHECK(std::abs(lemma_gap(weighted)) <= 1e-14);
  CHECK(classify_equality(weighted).tag == EqualityTag::kWeightedPair);

  // Balanced pair at offset 1/2 closes for every order.
  for (double r : {1.0, 2.0, 3.0, 5.5}) {
    const SequenceInstance balanced{{{-1, 0.5}, {0, 0.5}}, 0.5, 0.5, r};
    CHECK(std::abs(lemma_gap(balanced)) <= 1e-14);
    CHECK(classify_equality(balanced).tag == EqualityTag::kBalancedPair);
  }

  // Centered triple at r = 1.
  const SequenceInstance triple{{{-1, 0.2}, {0, 0.6}, {1, 0.2}}, 0.0, 0.5, 1.0};
  CHECK(std::abs(lemma_gap(triple)) <= 1e-14);
  CHECK(classify_equality(triple).tag == EqualityTag::kCenteredTriple);

  const SequenceInstance zero{{}, 0.0, 0.5, 2.0};
  CHECK(classify_equality(zero).tag == EqualityTag::kAllZero);

  const SequenceInstance atom{{{0, 0.8}}, 0.0, 0.5, 2.0};
  CHECK(std::abs(lemma_gap(atom)) <= 1e-14);
  CHECK(classify_equality(atom).tag == EqualityTag::kSingleAtom);

  const SequenceInstance strict{{{0, 0.5}, {1, 0.5}}, 0.0, 0.5, 2.0};
  CHECK(lemma_gap(strict) > 1e-3);
  CHECK(classify_equality(strict).tag == EqualityTag::kStrict);
}

TEST_CASE("outside the proved domain the bound can fail") {
  // phi far from 1/2 with r < 2.
  const SequenceInstance probe_phi{{{-1, 0.2}, {0, 0.8}}, 0.0, 0.2, 1.5};
  CHECK(!lemma_in_domain(probe_phi));
  CHECK(lemma_gap(probe_phi) < 0.0);

  // r < 1 fails even at phi = 1/2: gap = 2^(r-3) - 1/4 for uniform {0, 1}.
  const SequenceInstance probe_r{{{0, 0.5}, {1, 0.5}}, 0.0, 0.5, 0.5};
  CHECK(!lemma_in_domain(probe_r));
  const double want = std::pow(2.0, 0.5 - 3.0) - 0.25;
  CHECK(std::abs(lemma_gap(probe_r) - want) <= 1e-14);
  CHECK(want < 0.0);
}

}  // TEST_SUITE
