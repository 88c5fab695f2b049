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
#include <map>

#include <doctest.h>

#include "mhbounds/chain.hpp"
#include "mhbounds/distributions.hpp"
#include "mhbounds/errors.hpp"
#include "mhbounds/exact_oracle.hpp"
#include "mhbounds/mh_core.hpp"
#include "mhbounds/moment_formulas.hpp"

using namespace mhb;

namespace {

ChainSpec uniform5_step3() {
  const Target t = make_lattice_uniform(2);
  IntMatrix sp(2, 1);
  sp << -3, 3;
  const Proposal step = make_lattice_step(sp, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  return make_chain(t, step);
}

// The +-3 step splits {-2..2} into closed pairs, so simulation tests use this
// mixed-step variant instead: +-1 keeps every state reachable.
ChainSpec uniform5_step12() {
  const Target t = make_lattice_uniform(2);
  IntMatrix sp(4, 1);
  sp << -2, -1, 1, 2;
  const Proposal step = make_lattice_step(
      sp, std::vector<Rational>(4, Rational(1, 4)));
  return make_chain(t, step);
}

Vector vec1(double x) {
  Vector v(1);
  v << x;
  return v;
}

}  // namespace

TEST_SUITE("mh-core") {

TEST_CASE("acceptance probabilities") {
  const ChainSpec gauss = make_chain(make_gaussian(Vector::Zero(1), Vector::Ones(1)),
                                     make_gaussian_step(Vector::Ones(1)));
  // Downhill move 0 -> 1 for a standard normal target.
  CHECK(acceptance_prob(gauss, vec1(0.0), vec1(1.0)) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  // Uphill moves are always accepted.
  CHECK(acceptance_prob(gauss, vec1(1.0), vec1(0.0)) == 1.0);

  const ChainSpec lat = uniform5_step3();
  // Proposal leaving the support is rejected.
  CHECK(acceptance_prob(lat, vec1(2.0), vec1(5.0)) == 0.0);
  // From a zero-mass point every move is accepted by convention.
  CHECK(acceptance_prob(lat, vec1(7.0), vec1(-2.0)) == 1.0);
}

TEST_CASE("asymmetric proposals enter the acceptance ratio") {
  // U(-0.5, 1.5) step: alpha(x -> y) = min(1, pi(y) phi(x - y) / (pi(x) phi(y - x))).
  // For the flat target both densities are equal, so alpha = 1 whenever the
  // reverse move is possible and 0 otherwise.
  const ChainSpec spec = make_chain(make_uniform_interval(0.0, 10.0),
                                    make_uniform_step(-0.5, 1.5));
  CHECK(acceptance_prob(spec, vec1(5.0), vec1(5.4)) == 1.0);
  // Reverse increment -1.2 lies outside [-0.5, 1.5]: the ratio vanishes.
  CHECK(acceptance_prob(spec, vec1(5.0), vec1(6.2)) == 0.0);
}

TEST_CASE("paths are reproducible from the seed") {
  const ChainSpec spec = make_chain(make_gaussian(Vector::Zero(1), Vector::Ones(1)),
                                    make_gaussian_step(2.0 * Vector::Ones(1)));
  const Path a = simulate(spec, 500, 42u);
  const Path b = simulate(spec, 500, 42u);
  const Path c = simulate(spec, 500, 43u);
  REQUIRE(a.points.rows() == 501);
  CHECK(a.points == b.points);
  CHECK(a.points != c.points);
  CHECK(a.seed == 42u);
  // Prefix property: a shorter run is a prefix of a longer one.
  const Path d = simulate(spec, 100, 42u);
  CHECK(d.points == a.points.topRows(101));
}

TEST_CASE("empirical occupancy matches the stationary law") {
  const ChainSpec spec = uniform5_step12();
  const std::size_t n = 100000;
  const Path path = simulate(spec, n, 7u);
  std::map<int, double> freq;
  for (Eigen::Index i = 0; i < path.points.rows(); ++i) {
    freq[static_cast<int>(std::lround(path.points(i, 0)))] += 1.0;
  }
  for (auto& [state, count] : freq) {
    CHECK(std::abs(state) <= 2);
    const double p = count / static_cast<double>(path.points.rows());
    // Binomial standard error inflated for autocorrelation.
    CHECK(std::abs(p - 0.2) <= 6.0 * std::sqrt(0.2 * 0.8 / static_cast<double>(n)));
  }
}

TEST_CASE("pair estimators satisfy the variance decomposition identity") {
  const ChainSpec spec = make_chain(make_gaussian(Vector::Zero(1), Vector::Ones(1)),
                                    make_gaussian_step(2.0 * Vector::Ones(1)));
  const Path path = simulate(spec, 20000, 11u);
  const PathStats stats = path_stats(path, {1, 2, 5}, {2.0});
  for (const LagEstimate& le : stats.lags) {
    CHECK(std::abs(le.sq_identity_residual) <= 1e-9 * (1.0 + le.pooled_var));
  }
}

TEST_CASE("simulation agrees with the exact oracle") {
  const ChainSpec spec = uniform5_step12();
  const auto& lt = std::get<LatticeTarget>(spec.target);
  const RationalChain chain = build_kernel(lt, spec.proposal);
  const ExactLagStats<Rational> oracle = exact_lag_stats(chain, 1, {2});

  const Path path = simulate(spec, 200000, 12345u);
  const PathStats stats = path_stats(path, {1}, {2.0});
  const LagEstimate& le = stats.lags[0];
  CHECK(std::abs(le.tr_corr - to_double(oracle.tr_corr)) <= 5.0 * le.se_tr_corr);
  CHECK(std::abs(le.incr_moments[0] - to_double(oracle.incr_moments[0])) <=
        5.0 * le.se_incr[0]);
  CHECK(std::abs(le.tr_cov - to_double(oracle.tr_cov)) <= 5.0 * le.se_tr_cov);
}

TEST_CASE("simulation agrees with the quadrature formulas") {
  const ChainSpec spec = make_chain(make_gaussian(Vector::Zero(1), Vector::Ones(1)),
                                    make_gaussian_step(2.0 * Vector::Ones(1)));
  const Path path = simulate(spec, 100000, 99u);
  const PathStats stats = path_stats(path, {1}, {2.0});
  const LagEstimate& le = stats.lags[0];
  CHECK(std::abs(le.tr_corr - trace_corr_rwmh(spec)) <= 5.0 * le.se_tr_corr);
  CHECK(std::abs(le.incr_moments[0] - incr_moment_rwmh(spec, 2.0).value) <=
        5.0 * le.se_incr[0]);
}

TEST_CASE("directional estimates reduce to the trace in one dimension") {
  const ChainSpec spec = uniform5_step3();
  const Path path = simulate(spec, 5000, 5u);
  const PathStats stats = path_stats(path, {1}, {2.0}, {vec1(1.0)});
  const LagEstimate& le = stats.lags[0];
  CHECK(std::abs(le.cov_linear[0] - le.tr_cov) <= 1e-12 * (1.0 + std::abs(le.tr_cov)));
}

TEST_CASE("two-dimensional paths move one full vector per step") {
  const ChainSpec spec = make_chain(make_gaussian(Vector::Zero(2), Vector::Ones(2)),
                                    make_gaussian_step(Vector::Ones(2)));
  const Path path = simulate(spec, 2000, 17u);
  REQUIRE(path.points.cols() == 2);
  const PathStats stats = path_stats(path, {1}, {2.0});
  CHECK(stats.lags[0].pooled_var > 0.0);
}

TEST_CASE("degenerate paths and unsupported samplers throw") {
  const ChainSpec spec = uniform5_step3();
  const Path path = simulate(spec, 10, 1u);
  CHECK_THROWS_AS(path_stats(path, {10}, {2.0}), DegeneratePath);
  CHECK_THROWS_AS(path_stats(path, {1, 9}, {2.0}), DegeneratePath);

  CustomDensityTarget custom;
  custom.density = [](double x) { return std::exp(-std::abs(x)) / 2.0; };
  custom.lo = -40.0;
  custom.hi = 40.0;
  custom.symmetric = true;
  custom.unimodal = true;
  custom.mode = 0.0;
  const ChainSpec laplace = make_chain(make_custom_density(custom),
                                       make_gaussian_step(Vector::Ones(1)));
  CHECK_THROWS_AS(simulate(laplace, 100, 1u), UnsupportedSampler);
}

}  // TEST_SUITE
