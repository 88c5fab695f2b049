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

#include "mhbounds/chain.hpp"
#include "mhbounds/distributions.hpp"
#include "mhbounds/errors.hpp"
#include "mhbounds/exact_oracle.hpp"
#include "test_util.hpp"

using namespace mhb;

namespace {

RationalChain uniform5_step3() {
  const Target t = make_lattice_uniform(2);
  IntMatrix sp(2, 1);
  sp << -3, 3;
  const Proposal step = make_lattice_step(sp, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  return build_kernel(std::get<LatticeTarget>(t), step);
}

}  // namespace

TEST_SUITE("exact-oracle") {

TEST_CASE("kernel rows are stochastic and reversible") {
  std::mt19937_64 rng(7u);
  for (int it = 0; it < 60; ++it) {
    const auto c = mhb_test::random_lattice_case(rng, 7, it % 2 == 0);
    const RationalChain chain = build_kernel(std::get<LatticeTarget>(c.target), c.step);
    const auto n = chain.states.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      Rational row_sum = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        CHECK(chain.k(i, j) >= 0);
        row_sum += chain.k(i, j);
      }
      CHECK(row_sum == Rational(1));
    }
    CHECK(check_reversibility(chain) == 0.0);
  }
}

TEST_CASE("stationarity: pi K = pi exactly") {
  std::mt19937_64 rng(8u);
  for (int it = 0; it < 40; ++it) {
    const auto c = mhb_test::random_lattice_case(rng);
    const RationalChain chain = build_kernel(std::get<LatticeTarget>(c.target), c.step);
    const auto n = chain.states.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
      Rational col = 0;
      for (Eigen::Index i = 0; i < n; ++i) col += chain.pi[i] * chain.k(i, j);
      CHECK(col == chain.pi[j]);
    }
  }
}

TEST_CASE("uniform{-2..2} with step +-3 attains the odd-step floor") {
  const RationalChain chain = uniform5_step3();
  const ExactLagStats<Rational> st = exact_lag_stats(chain, 1, {2});
  CHECK(st.incr_moments[0] == Rational(18, 5));
  CHECK(st.tr_var == Rational(2));
  CHECK(st.tr_cov == Rational(1, 5));
  CHECK(st.tr_corr == Rational(1, 10));
}

TEST_CASE("variance decomposition holds exactly at every lag") {
  std::mt19937_64 rng(9u);
  for (int it = 0; it < 40; ++it) {
    const auto c = mhb_test::random_lattice_case(rng);
    const RationalChain chain = build_kernel(std::get<LatticeTarget>(c.target), c.step);
    for (int lag : {0, 1, 2, 3}) {
      const ExactLagStats<Rational> st = exact_lag_stats(chain, lag, {2});
      // trCov = trVar - E|X_lag - X_0|^2 / 2, with both sides exact.
      CHECK(st.tr_cov == st.tr_var - st.incr_moments[0] / 2);
    }
  }
}

TEST_CASE("lag zero gives variance and correlation one") {
  const RationalChain chain = uniform5_step3();
  const ExactLagStats<Rational> st = exact_lag_stats(chain, 0, {1, 2});
  CHECK(st.tr_cov == st.tr_var);
  CHECK(st.tr_corr == Rational(1));
  CHECK(st.incr_moments[0] == Rational(0));
  CHECK(st.incr_moments[1] == Rational(0));
}

TEST_CASE("conditional-mean variance equals the lag-2 covariance") {
  std::mt19937_64 rng(10u);
  for (int it = 0; it < 40; ++it) {
    const auto c = mhb_test::random_lattice_case(rng, 7, it % 2 == 0);
    const RationalChain chain = build_kernel(std::get<LatticeTarget>(c.target), c.step);
    const ExactLagStats<Rational> st = exact_lag_stats(chain, 2, {});
    CHECK(st.tr_cov == conditional_mean_trvar(chain));
    CHECK(st.tr_cov >= 0);
  }
}

TEST_CASE("even lags have nonnegative covariance, odd lags may not") {
  std::mt19937_64 rng(11u);
  for (int it = 0; it < 60; ++it) {
    const auto c = mhb_test::random_lattice_case(rng);
    const RationalChain chain = build_kernel(std::get<LatticeTarget>(c.target), c.step);
    for (int lag : {2, 4, 6, 8}) {
      CHECK(exact_lag_stats(chain, lag, {}).tr_cov >= 0);
    }
    // Random-walk chains keep lag 1 nonnegative as well: the jump bound at
    // r = 2 caps the mean-square increment by twice the variance.
    CHECK(exact_lag_stats(chain, 1, {}).tr_cov >= 0);
  }
  // Negative odd lags need a general reversible kernel; the deterministic
  // swap on {-1, 1} alternates sign with the lag.
  IntMatrix states(2, 1);
  states << -1, 1;
  const Target t = make_lattice_pmf(states, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  const Proposal swap = make_explicit_q(states, {{Rational(0), Rational(1)},
                                                 {Rational(1), Rational(0)}});
  const RationalChain sw = build_kernel(std::get<LatticeTarget>(t), swap);
  CHECK(exact_lag_stats(sw, 1, {}).tr_cov < 0);
  CHECK(exact_lag_stats(sw, 3, {}).tr_cov < 0);
  CHECK(exact_lag_stats(sw, 2, {}).tr_cov > 0);
}

TEST_CASE("double kernel agrees with the rational kernel") {
  std::mt19937_64 rng(12u);
  for (int it = 0; it < 20; ++it) {
    const auto c = mhb_test::random_lattice_case(rng);
    const auto& lt = std::get<LatticeTarget>(c.target);
    const RationalChain exact = build_kernel(lt, c.step);
    const DoubleChain dbl = build_kernel_double(lt, c.step);
    const ExactLagStats<Rational> se = exact_lag_stats(exact, 1, {2});
    const ExactLagStats<double> sd = exact_lag_stats(dbl, 1, {2.0});
    CHECK(std::abs(sd.tr_cov - to_double(se.tr_cov)) <= 1e-13 * (1.0 + std::abs(sd.tr_cov)));
    CHECK(std::abs(sd.incr_moments[0] - to_double(se.incr_moments[0])) <=
          1e-13 * (1.0 + sd.incr_moments[0]));
    CHECK(check_reversibility(dbl) <= 1e-15);
  }
}

TEST_CASE("to_double_chain preserves the kernel") {
  const RationalChain exact = uniform5_step3();
  const DoubleChain dbl = to_double_chain(exact);
  for (Eigen::Index i = 0; i < exact.states.rows(); ++i) {
    for (Eigen::Index j = 0; j < exact.states.rows(); ++j) {
      CHECK(dbl.k(i, j) == to_double(exact.k(i, j)));
    }
  }
}

TEST_CASE("explicit proposal kernels: the swap chain") {
  IntMatrix states(2, 1);
  states << -1, 1;
  const Target t = make_lattice_pmf(states, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  const Proposal swap = make_explicit_q(states, {{Rational(0), Rational(1)},
                                                 {Rational(1), Rational(0)}});
  const RationalChain chain = build_kernel(std::get<LatticeTarget>(t), swap);
  const ExactLagStats<Rational> st = exact_lag_stats(chain, 1, {});
  CHECK(st.tr_corr == Rational(-1));
  const ExactLagStats<Rational> st2 = exact_lag_stats(chain, 2, {});
  CHECK(st2.tr_corr == Rational(1));
  CHECK(check_reversibility(chain) == 0.0);
}

TEST_CASE("directional covariance reduces to the trace in one dimension") {
  const RationalChain chain = uniform5_step3();
  const ExactLagStats<Rational> st = exact_lag_stats(chain, 1, {}, {{Rational(1)}});
  const ExactLagStats<Rational> plain = exact_lag_stats(chain, 1, {});
  CHECK(st.cov_linear[0] == plain.tr_cov);
  const ExactLagStats<Rational> scaled = exact_lag_stats(chain, 1, {}, {{Rational(3)}});
  CHECK(scaled.cov_linear[0] == plain.tr_cov * 9);
}

TEST_CASE("degenerate and invalid inputs") {
  IntMatrix one(1, 1);
  one << 0;
  const Target t = make_lattice_pmf(one, std::vector<Rational>{Rational(1)});
  IntMatrix sp(2, 1);
  sp << -1, 1;
  const Proposal step = make_lattice_step(sp, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  const RationalChain chain = build_kernel(std::get<LatticeTarget>(t), step);
  CHECK_THROWS_AS(exact_lag_stats(chain, 1, {}), DegeneratePath);
  const RationalChain good = uniform5_step3();
  CHECK_THROWS_AS(exact_lag_stats(good, -1, {}), RangeError);
}

TEST_CASE("frozen coordinates stay frozen") {
  // Mass 1/2 at -1 and 2 with steps +-1: every proposal lands outside the
  // support, so the kernel is the identity and the correlation is 1.
  IntMatrix pts(2, 1);
  pts << -1, 2;
  const Target t = make_lattice_pmf(pts, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  IntMatrix sp(2, 1);
  sp << -1, 1;
  const Proposal step = make_lattice_step(sp, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  const RationalChain chain = build_kernel(std::get<LatticeTarget>(t), step);
  const ExactLagStats<Rational> st = exact_lag_stats(chain, 1, {2});
  CHECK(st.incr_moments[0] == Rational(0));
  CHECK(st.tr_corr == Rational(1));
}

}  // TEST_SUITE
