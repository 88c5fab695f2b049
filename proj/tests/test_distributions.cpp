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
#include "test_util.hpp"

using namespace mhb;

namespace {

// E|X|^r for X ~ N(0, 1).
double normal_abs_moment(double r) {
  return std::pow(2.0, r / 2.0) * std::tgamma((r + 1.0) / 2.0) / std::sqrt(M_PI);
}

}  // namespace

TEST_SUITE("distributions") {

TEST_CASE("gaussian absolute moments match the gamma closed form") {
  const Target t = make_gaussian(Vector::Zero(1), Vector::Ones(1));
  for (double r : {0.5, 1.0, 2.0, 3.0, 3.7, 6.0}) {
    const double got = absolute_moment(t, r);
    const double want = normal_abs_moment(r);
    CHECK(std::abs(got - want) <= 1e-9 * (1.0 + want));
  }
  // Scaled and shifted: E|X - mu|^r depends only on the standard deviation.
  Vector mean(1), var(1), m(1);
  mean << 3.0;
  var << 4.0;
  m << 3.0;
  const Target shifted = make_gaussian(mean, var);
  CHECK(std::abs(absolute_moment(shifted, 3.0, m) - 8.0 * normal_abs_moment(3.0)) <=
        1e-8 * (1.0 + 8.0 * normal_abs_moment(3.0)));
}

TEST_CASE("uniform interval moments and tails") {
  const Target t = make_uniform_interval(-1.0, 3.0);
  // E|X|^3 = (1/4) (1/4 + 81/4).
  CHECK(std::abs(absolute_moment(t, 3.0) - 82.0 / 16.0) <= 1e-10);
  CHECK(std::abs(to_double(Rational(1)) - 1.0) == 0.0);
  // P(|X| > 2) = 1/4 for U(-1, 3).
  CHECK(std::abs(tail_probability(t, 2.0) - 0.25) <= 1e-12);
  CHECK(mean_vector(t)[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(is_unimodal(t));
  CHECK(!is_symmetric(t));
}

TEST_CASE("gaussian tails match erfc") {
  const Target t = make_gaussian(Vector::Zero(1), Vector::Ones(1));
  for (double y : {0.5, 1.0, 2.5}) {
    const double want = std::erfc(y / std::sqrt(2.0));
    CHECK(std::abs(tail_probability(t, y) - want) <= 1e-12 * (1.0 + want));
  }
  CHECK(tail_probability(t, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("tail probabilities are nonincreasing in the radius") {
  std::vector<Target> targets;
  targets.push_back(make_gaussian(Vector::Zero(1), Vector::Ones(1)));
  targets.push_back(make_uniform_mixture({{-2.0, -1.0, 0.5}, {1.0, 2.0, 0.5}}));
  targets.push_back(make_lattice_uniform(3));
  for (const Target& t : targets) {
    double prev = 1.0 + 1e-15;
    for (double y = 0.0; y <= 4.0; y += 0.25) {
      const double cur = tail_probability(t, y);
      CHECK(cur <= prev + 1e-12);
      CHECK(cur >= -1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("lattice moments are exact rationals") {
  const Target t = make_lattice_uniform(2);
  const auto& lt = std::get<LatticeTarget>(t);
  CHECK(absolute_moment_exact(lt, 2, {Rational(0)}) == Rational(2));
  CHECK(absolute_moment_exact(lt, 1, {Rational(0)}) == Rational(6, 5));
  // About the point 1/2 the first absolute moment is (5/2+3/2+1/2+1/2+3/2)/5.
  CHECK(absolute_moment_exact(lt, 1, {Rational(1, 2)}) == Rational(13, 10));
  CHECK(tail_probability_exact(lt, 1) == Rational(2, 5));
  CHECK(std::abs(absolute_moment(t, 2.0) - 2.0) <= 1e-14);
}

TEST_CASE("bernoulli pmf and mean") {
  const Target t = make_bernoulli(Rational(1, 3));
  const auto& lt = std::get<LatticeTarget>(t);
  CHECK(lt.mass_q.size() == 2);
  CHECK(mean_vector(t)[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(absolute_moment_exact(lt, 2, {Rational(0)}) == Rational(1, 3));
  CHECK_THROWS_AS(make_bernoulli(Rational(7, 5)), MassError);
}

TEST_CASE("mixture moments against hand integration") {
  // 1/2 U(-2,-1) + 1/2 U(1,2): E|X|^2 = (1/1) int_1^2 x^2 dx = 7/3.
  const Target t = make_uniform_mixture({{-2.0, -1.0, 0.5}, {1.0, 2.0, 0.5}});
  CHECK(std::abs(absolute_moment(t, 2.0) - 7.0 / 3.0) <= 1e-10);
  CHECK(is_symmetric(t));
  CHECK(!is_unimodal(t));
  CHECK(std::abs(mean_vector(t)[0]) <= 1e-12);
}

TEST_CASE("star-unimodal targets normalize and integrate") {
  const Target t = make_star_unimodal(2, {{0.0, 1.0}, {2.0, 0.0}});
  // r = 0 recovers the total mass through the same radial integration path.
  CHECK(std::abs(absolute_moment(t, 0.0) - 1.0) <= 1e-9);
  // Cone in the plane: density c(1 - s/2), normalization c = 3/(2 pi),
  // E|X| = 2 pi c int_0^2 s^2 (1 - s/2) ds = 1.
  CHECK(std::abs(absolute_moment(t, 1.0) - 1.0) <= 1e-9);
  CHECK(is_symmetric(t));
  CHECK(is_unimodal(t));
}

TEST_CASE("linear moments of an isotropic gaussian") {
  const Target t = make_gaussian(Vector::Zero(2), Vector::Ones(2));
  Vector c(2);
  c << 1.0, 1.0;
  // <c, X> ~ N(0, 2), so E|<c,X>|^3 = 2 sqrt(2) E|N(0,1)|^3.
  const double want = 2.0 * std::sqrt(2.0) * normal_abs_moment(3.0);
  CHECK(std::abs(linear_abs_moment(t, c, 0.0, 3.0) - want) <= 1e-8 * (1.0 + want));
}

TEST_CASE("symmetrization is idempotent and halves one-sided mass") {
  // pi with mass 1/2 at -1 and 1/2 at 2 symmetrizes to uniform on
  // {-2, -1, 1, 2}.
  IntMatrix pts(2, 1);
  pts << -1, 2;
  const Target t = make_lattice_pmf(pts, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  const Target sym = symmetrize_target(t);
  const auto& ls = std::get<LatticeTarget>(sym);
  CHECK(ls.points.rows() == 4);
  for (int i = 0; i < ls.points.rows(); ++i) {
    CHECK(ls.mass_q[static_cast<std::size_t>(i)] == Rational(1, 4));
  }
  CHECK(is_symmetric(sym));
  // A second symmetrization changes nothing.
  const Target sym2 = symmetrize_target(sym);
  const auto& ls2 = std::get<LatticeTarget>(sym2);
  REQUIRE(ls2.points.rows() == ls.points.rows());
  for (int i = 0; i < ls.points.rows(); ++i) {
    CHECK(ls2.mass_q[static_cast<std::size_t>(i)] == ls.mass_q[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("step queries") {
  const Proposal g = make_gaussian_step(2.0 * Vector::Ones(1));
  CHECK(is_symmetric(g));
  CHECK(std::abs(step_second_moment(g) - 4.0) <= 1e-12);
  CHECK(!has_odd_support(g));

  IntMatrix sp(2, 1);
  sp << -3, 3;
  const Proposal odd = make_lattice_step(sp, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  CHECK(is_symmetric(odd));
  CHECK(has_odd_support(odd));
  CHECK(std::abs(step_second_moment(odd) - 9.0) <= 1e-12);

  const Proposal uneven = make_uniform_step(-1.0, 3.0);
  CHECK(!is_symmetric(uneven));
  CHECK(is_random_walk(uneven));
}

TEST_CASE("random lattice cases are valid pmfs") {
  std::mt19937_64 rng(20260815u);
  for (int i = 0; i < 50; ++i) {
    const auto c = mhb_test::random_lattice_case(rng, 7, i % 2 == 0, i % 3 == 0);
    const auto& lt = std::get<LatticeTarget>(c.target);
    Rational total = 0;
    for (const auto& w : lt.mass_q) {
      CHECK(w > 0);
      total += w;
    }
    CHECK(total == Rational(1));
    CHECK(is_random_walk(c.step));
    if (i % 2 == 0) CHECK(is_symmetric(c.step));
  }
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(make_uniform_interval(2.0, 2.0), PreconditionFailed);
  CHECK_THROWS_AS(make_gaussian(Vector::Zero(2), Vector::Ones(1)), DimensionMismatch);
  CHECK_THROWS_AS(make_uniform_mixture({{0.0, 1.0, 0.5}}), MassError);
  IntMatrix pts(2, 1);
  pts << 0, 1;
  CHECK_THROWS_AS(make_lattice_pmf(pts, std::vector<Rational>{Rational(1, 2), Rational(1, 3)}),
                  MassError);
  CHECK_THROWS_AS(make_lattice_pmf(pts, std::vector<Rational>{Rational(1)}), SupportMismatch);
  CHECK_THROWS_AS(make_axis_odd_step(1, {AxisMove{0, 2, Rational(1)}}), PreconditionFailed);
  CHECK_THROWS_AS(make_star_unimodal(2, {{0.0, 1.0}, {1.0, 2.0}}), PreconditionFailed);
}

TEST_CASE("find_point locates lattice states") {
  const Target t = make_lattice_uniform(2);
  const auto& lt = std::get<LatticeTarget>(t);
  Eigen::VectorXi z(1);
  z << 1;
  const long idx = find_point(lt.points, z);
  REQUIRE(idx >= 0);
  CHECK(lt.points(idx, 0) == 1);
  z << 7;
  CHECK(find_point(lt.points, z) < 0);
}

}  // TEST_SUITE
