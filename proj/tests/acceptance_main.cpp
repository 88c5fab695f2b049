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

// Acceptance gate: ten end-to-end checks, one pass/fail line each. Every
// check pins a quantitative claim of the library (exact rational fixtures,
// certified optimizers, closed forms, statistical agreement of simulations)
// together with a wall-clock budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mhbounds/bounds.hpp"
#include "mhbounds/chain.hpp"
#include "mhbounds/distributions.hpp"
#include "mhbounds/errors.hpp"
#include "mhbounds/exact_oracle.hpp"
#include "mhbounds/extremal.hpp"
#include "mhbounds/mh_core.hpp"
#include "mhbounds/moment_formulas.hpp"
#include "mhbounds/tv_shift.hpp"
#include "test_util.hpp"

using namespace mhb;

namespace {

struct Checker {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (notes.size() < 12) notes.push_back(what);
    }
  }
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

Rational pow2(unsigned e) {
  Rational v = 1;
  for (unsigned i = 0; i < e; ++i) v *= 2;
  return v;
}

Proposal symmetric_pair_step(int offset) {
  IntMatrix sp(2, 1);
  sp << -offset, offset;
  return make_lattice_step(sp, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
}

ChainSpec opposite_pair_chain() {
  IntMatrix pts(2, 1);
  pts << -1, 1;
  const Target target =
      make_lattice_pmf(pts, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  return make_chain(target, symmetric_pair_step(2));
}

// --------------------------------------------------------------------------
// 1. Exact rational fixtures.

void exact_rational_fixtures(Checker& ck) {
  const ExactExtremal e2 = s_of_r_exact(2);
  ck.expect(e2.value == Rational(9, 5), "optimal constant at order 2 is not 9/5");
  ck.expect(e2.argmax_k == 2 && e2.argmax_y == 1,
            "order-2 maximizer is not (k, y) = (2, 1)");
  ck.expect(g_ratio_exact(3, 2) == Rational(25, 14), "edge ratio g(3; 2) is not 25/14");
  ck.expect(thresholds(2.0).k_edge == 3, "edge cutoff at order 2 is not 3");

  const Target t5 = make_lattice_uniform(2);
  const RationalChain five =
      build_kernel(std::get<LatticeTarget>(t5), symmetric_pair_step(3));
  const auto st5 = exact_lag_stats(five, 1, {2});
  ck.expect(st5.incr_moments[0] == Rational(18, 5),
            "squared increment of uniform{-2..2} with +-3 step is not 18/5");
  ck.expect(st5.tr_corr == Rational(1, 10),
            "lag-1 correlation of uniform{-2..2} with +-3 step is not 1/10");

  const ChainSpec pair = opposite_pair_chain();
  const auto& pair_lt = std::get<LatticeTarget>(pair.target);
  for (unsigned r : {2u, 3u, 4u}) {
    ck.expect(incr_moment_rwmh_exact(pair_lt, pair.proposal, r) == pow2(r - 1),
              "opposite pair does not attain 2^(r-1) at r = " + std::to_string(r));
  }

  IntMatrix pts(2, 1);
  pts << -1, 1;
  const Target pt =
      make_lattice_pmf(pts, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  const Proposal swap = make_explicit_q(
      pts, {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}});
  const RationalChain swap_chain = build_kernel(std::get<LatticeTarget>(pt), swap);
  const auto swap_stats = exact_lag_stats(swap_chain, 1, {});
  ck.expect(swap_stats.tr_corr == Rational(-1),
            "deterministic swap correlation is not exactly -1");
}

// --------------------------------------------------------------------------
// 2. Certified scan against brute force.

void extremal_scan_vs_brute(Checker& ck) {
  for (double r : {1.1, 2.0, 3.5, 5.0, 8.01, 10.0}) {
    const ExtremalResult res = s_of_r(r);
    const BruteResult brute = brute_force_s(r, res.argmax_k + 5);
    ck.expect(std::abs(res.value - brute.value) <= 1e-12 * (1.0 + brute.value),
              "scan and brute force disagree at r = " + fmt(r));
    ck.expect(res.argmax_k == brute.argmax_k && res.argmax_y == brute.argmax_y,
              "scan and brute-force maximizers disagree at r = " + fmt(r));
  }
  for (int i = 0; i <= 10; ++i) {
    const double r = 3.2 + 0.1 * i;
    const double closed = std::pow(7.0, r) / (std::pow(4.0, r) + std::pow(3.0, r) +
                                              std::pow(2.0, r) + 1.0);
    ck.expect(std::abs(s_of_r(r).value - closed) <= 1e-12 * (1.0 + closed),
              "plateau closed form 7^r / (4^r + 3^r + 2^r + 1) fails at r = " + fmt(r));
  }
  const ExtremalResult res = s_of_r(80.1);
  const BruteResult brute = brute_force_s(80.1, res.argmax_k + 5);
  ck.expect(std::abs(res.log_value - brute.log_value) <=
                1e-12 * (1.0 + std::abs(brute.log_value)),
            "scan and brute force disagree at r = 80.1");
  ck.expect(res.argmax_k == brute.argmax_k,
            "scan and brute-force maximizers disagree at r = 80.1 (scan " +
                std::to_string(res.argmax_k) + ", brute " +
                std::to_string(brute.argmax_k) + ")");
}

// --------------------------------------------------------------------------
// 3. Doubling asymptote.

void doubling_asymptote(Checker& ck) {
  const double r = 400.0;
  const ExtremalResult res = s_of_r(r);
  const double log_const = std::log(2.0 * std::sqrt(3.0) / 9.0);
  const double ratio = std::exp(res.log_value - r * std::log(2.0) - log_const);
  ck.expect(ratio >= 0.9875 && ratio <= 1.0125,
            "s(400) / ((2 sqrt(3)/9) 2^400) = " + fmt(ratio) +
                " leaves [0.9875, 1.0125]");
}

// --------------------------------------------------------------------------
// 4. Sequence-lemma fuzz with equality classification.

void sequence_lemma_fuzz(Checker& ck) {
  std::mt19937_64 rng(20260815ull);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);
  std::uniform_int_distribution<int> span_dist(1, 6);
  long classified = 0;

  for (long it = 0; it < 100000 && ck.ok; ++it) {
    SequenceInstance inst;
    const bool high_order = (it % 2 == 0);
    if (high_order) {
      inst.r = 2.0 + 4.0 * unif01(rng);
      inst.phi = unif01(rng);
    } else {
      inst.r = 1.0 + 0.999 * unif01(rng);
      inst.phi = 0.5;
    }
    inst.b = 2.0 * unif01(rng) - 1.0;
    const int span = span_dist(rng);
    const long lo = -(span / 2);
    for (long n = lo; n <= lo + span; ++n) {
      if (unif01(rng) < 0.2) continue;
      inst.p[n] = unif01(rng);
    }

    // Inject the known equality families so the classifier is exercised.
    const long inj = it % 1999;
    if (inj == 0) {
      inst.p.clear();
      const double m = 0.25 + 0.5 * unif01(rng);
      inst.p[-1] = m;
      inst.p[0] = m;
      inst.b = 0.5;
      inst.phi = 0.5;
    } else if (inj == 700 && high_order) {
      const double q = 0.05 + 0.9 * unif01(rng);
      inst.p.clear();
      inst.p[-1] = q;
      inst.p[0] = 1.0 - q;
      inst.b = q;
      inst.phi = q;
      inst.r = 2.0;
    } else if (inj == 1401 && !high_order) {
      inst.p.clear();
      const double side_a = 0.3 * unif01(rng);
      const double side_b = 0.3 * unif01(rng);
      inst.p[-1] = side_a;
      inst.p[0] = std::max(side_a, side_b) + 0.1 + 0.3 * unif01(rng);
      inst.p[1] = side_b;
      inst.b = 0.0;
      inst.phi = 0.5;
      inst.r = 1.0;
    }

    ck.expect(lemma_in_domain(inst), "generated instance left the proved domain");
    const double gap = lemma_gap(inst);
    const double scale = lemma_scale(inst);
    ck.expect(gap >= -1e-12 * scale,
              "negative gap " + fmt(gap) + " at iteration " + std::to_string(it));
    if (gap <= 1e-12 * scale) {
      try {
        const EqualityClass cls = classify_equality(inst);
        ck.expect(cls.tag != EqualityTag::kStrict,
                  "zero gap classified as strict at iteration " + std::to_string(it));
        ++classified;
      } catch (const Error& e) {
        ck.expect(false, std::string("classification failed: ") + e.what());
      }
    }
  }
  ck.expect(classified >= 50, "too few zero-gap instances were exercised");

  // Outside the proved domain the bound genuinely fails, in both directions.
  SequenceInstance probe_phi;
  probe_phi.p = {{-1, 0.2}, {0, 0.8}};
  probe_phi.b = 0.0;
  probe_phi.phi = 0.2;
  probe_phi.r = 1.5;
  ck.expect(!lemma_in_domain(probe_phi), "skew-split probe claims to be in domain");
  ck.expect(lemma_gap(probe_phi) < 0.0, "skew-split probe fails to go negative");

  SequenceInstance probe_r;
  probe_r.p = {{0, 0.5}, {1, 0.5}};
  probe_r.b = 0.0;
  probe_r.phi = 0.5;
  probe_r.r = 0.5;
  ck.expect(!lemma_in_domain(probe_r), "low-order probe claims to be in domain");
  const double expected = std::pow(2.0, -2.5) - 0.25;
  ck.expect(std::abs(lemma_gap(probe_r) - expected) <= 1e-14,
            "low-order probe gap is not 2^(-5/2) - 1/4");
}

// --------------------------------------------------------------------------
// 5. Continuous closed forms, bound margins, and a long simulation.

void continuous_chain_checks(Checker& ck) {
  const ChainSpec unif = make_chain(make_uniform_interval(-1.0, 1.0),
                                    make_uniform_step(-2.0, 2.0));
  const double incr = incr_moment_rwmh(unif, 2.0).value;
  ck.expect(std::abs(incr - 1.0 / 3.0) <= 1e-9,
            "squared increment of the uniform chain is " + fmt(incr) + ", want 1/3");
  const double cov = trace_cov_rwmh(unif);
  ck.expect(std::abs(cov - 1.0 / 6.0) <= 1e-9,
            "lag-1 covariance of the uniform chain is " + fmt(cov) + ", want 1/6");
  const double corr = trace_corr_rwmh(unif);
  ck.expect(std::abs(corr - 0.5) <= 1e-9,
            "lag-1 correlation of the uniform chain is " + fmt(corr) + ", want 1/2");

  std::vector<BoundReport> reports;
  reports.push_back(check_general_bound(unif, 2.0, Vector::Zero(1)));
  reports.push_back(check_unimodal_bound(unif, 2.0, Vector::Zero(1)));
  bool saw_ninth = false;
  for (const BoundReport& rep : corr_reports(unif)) {
    reports.push_back(rep);
    if (rep.theorem_id == "corr-gt-1/9" && rep.method != "skipped") saw_ninth = true;
  }
  ck.expect(saw_ninth, "the 1/9 correlation floor was not evaluated");
  for (const BoundReport& rep : reports) {
    if (rep.method == "skipped") continue;
    ck.expect(rep.pass && rep.margin > 0.0,
              rep.theorem_id + " margin " + fmt(rep.margin) + " is not strictly positive");
  }

  const ChainSpec gauss = make_chain(make_gaussian(Vector::Zero(1), Vector::Ones(1)),
                                     make_gaussian_step(2.0 * Vector::Ones(1)));
  const double gauss_corr = trace_corr_rwmh(gauss);
  ck.expect(gauss_corr > 0.0, "gaussian chain correlation is not positive");

  const Path path = simulate(gauss, 1000000, 2026u);
  const LagEstimate est = path_stats(path, {1}, {2.0}).lags[0];
  ck.expect(std::abs(est.tr_corr - gauss_corr) <= 3.0 * est.se_tr_corr,
            "simulated correlation " + fmt(est.tr_corr) + " is more than 3 standard errors from " +
                fmt(gauss_corr) + " (se " + fmt(est.se_tr_corr) + ")");
}

// --------------------------------------------------------------------------
// 6. Sharpness ladder for a distant two-sided step.

void sharpness_ladder(Checker& ck) {
  const Target target = make_uniform_interval(-3.0, 3.0);
  const double moment = absolute_moment(target, 2.0);
  double prev = 0.0;
  double last = 0.0;
  for (double eps : {0.1, 0.05, 0.01}) {
    const ChainSpec spec = make_chain(target, make_two_sided_uniform_step(4.0, eps));
    const double ratio = incr_moment_rwmh(spec, 2.0).value / moment;
    ck.expect(ratio > prev,
              "ratio did not increase when the step width shrank to " + fmt(eps));
    prev = ratio;
    last = ratio;
  }
  ck.expect(last > 1.70 && last < 16.0 / 9.0,
            "narrowest-step ratio " + fmt(last) + " leaves (1.70, 16/9)");
}

// --------------------------------------------------------------------------
// 7. Even-lag positivity across random reversible kernels.

RationalChain random_reversible_kernel(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_dist(2, 9);
  std::uniform_int_distribution<int> w_dist(1, 9);
  std::uniform_int_distribution<int> a_dist(0, 9);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);
  const int n = n_dist(rng);

  std::vector<int> pool(21);
  std::iota(pool.begin(), pool.end(), -10);
  std::shuffle(pool.begin(), pool.end(), rng);

  RationalChain ch;
  ch.states.resize(n, 1);
  for (int i = 0; i < n; ++i) ch.states(i, 0) = pool[static_cast<std::size_t>(i)];

  std::vector<long> w(static_cast<std::size_t>(n));
  long total = 0;
  for (auto& wi : w) {
    wi = w_dist(rng);
    total += wi;
  }

  // Symmetric integer link weights give detailed balance by construction:
  // k_ij = a_ij / (w_i M) so that pi_i k_ij = a_ij / (total M) = pi_j k_ji.
  Eigen::MatrixXi links = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (unif01(rng) < 0.7) {
        const int a = a_dist(rng);
        links(i, j) = a;
        links(j, i) = a;
      }
    }
  }
  if (links.sum() == 0) {
    links(0, 1) = 1;
    links(1, 0) = 1;
  }

  long scale = 1;
  for (int i = 0; i < n; ++i) {
    long row = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) row += links(i, j);
    }
    scale = std::max(scale, (row + w[static_cast<std::size_t>(i)] - 1) /
                                w[static_cast<std::size_t>(i)]);
  }

  ch.pi.resize(n);
  ch.k.resize(n, n);
  for (int i = 0; i < n; ++i) {
    ch.pi(i) = Rational(w[static_cast<std::size_t>(i)], total);
    Rational row_sum = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      ch.k(i, j) = Rational(links(i, j), w[static_cast<std::size_t>(i)] * scale);
      row_sum += ch.k(i, j);
    }
    ch.k(i, i) = Rational(1) - row_sum;
  }
  ch.q = ch.k;
  return ch;
}

void even_lag_positivity(Checker& ck) {
  std::mt19937_64 rng(90210u);
  for (int it = 0; it < 200 && ck.ok; ++it) {
    RationalChain chain;
    if (it % 2 == 0) {
      chain = random_reversible_kernel(rng);
    } else {
      const auto c = mhb_test::random_lattice_case(rng, 9);
      chain = build_kernel(std::get<LatticeTarget>(c.target), c.step);
    }
    ck.expect(check_reversibility(chain) == 0.0,
              "kernel " + std::to_string(it) + " is not exactly reversible");
    for (int lag : {0, 2, 4, 6, 8}) {
      const auto st = exact_lag_stats(chain, lag, {});
      ck.expect(st.tr_cov >= 0,
                "negative even-lag covariance at kernel " + std::to_string(it) +
                    ", lag " + std::to_string(lag));
    }
    const auto lag2 = exact_lag_stats(chain, 2, {});
    ck.expect(lag2.tr_cov == conditional_mean_trvar(chain),
              "lag-2 covariance identity fails at kernel " + std::to_string(it));
  }
}

// --------------------------------------------------------------------------
// 8. Normal reference curve.

void normal_reference_curve(Checker& ck) {
  const double knee = 1.0 + std::sqrt(2.0);
  const RhoNormal at_knee = normal_example_rho(knee);
  ck.expect(std::abs(at_knee.rho_hat - 1.0) <= 1e-12,
            "step-moment comparison curve is not 1 at order 1 + sqrt(2)");
  const RhoNormal at_one = normal_example_rho(1.0);
  ck.expect(std::abs(at_one.rho_tilde - 1.0) <= 1e-12,
            "large-order comparison curve is not 1 at order 1");
  const RhoNormal small = normal_example_rho(0.01);
  ck.expect(small.rho > 0.49 && small.rho < 0.51,
            "rho(0.01) = " + fmt(small.rho) + " leaves (0.49, 0.51)");
  for (double r : {0.5, 1.0, 2.0}) {
    const RhoNormal rho = normal_example_rho(r);
    ck.expect(rho.rho <= rho.small_r_bound + 1e-9,
              "rho exceeds 2^((r-2)/2) at r = " + fmt(r));
  }
  const RhoNormal fifty = normal_example_rho(50.0);
  const double ratio = fifty.rho / fifty.rho_tilde;
  ck.expect(ratio >= 0.95 && ratio <= 1.05,
            "rho(50) over its comparison curve is " + fmt(ratio) +
                ", outside [0.95, 1.05]");
}

// --------------------------------------------------------------------------
// 9. Two-point symmetrization constructors.

void two_point_constructors(Checker& ck) {
  for (double want : {0.6, 0.5 * (std::sqrt(2.0) + 1.0), 1.0, 2.0, 10.0}) {
    const TwoPointExample ex = construct_alpha_example(want);
    const SymmetrizationFactors sf =
        symmetrization_factors(ex.chain.target, ex.chain.proposal, 2.0);
    ck.expect(std::abs(sf.alpha - want) <= 1e-10 * (1.0 + want),
              "alpha round-trip drifted at " + fmt(want) + ": got " + fmt(sf.alpha));
  }
  for (double want : {0.6, 1.0, 5.0}) {
    const TwoPointExample ex = construct_beta_example(want);
    const SymmetrizationFactors sf =
        symmetrization_factors(ex.chain.target, ex.chain.proposal, 2.0);
    ck.expect(std::abs(sf.beta - want) <= 1e-10 * (1.0 + want),
              "beta round-trip drifted at " + fmt(want) + ": got " + fmt(sf.beta));
  }

  // Frozen two-atom target whose symmetrization starts moving: the target
  // factor is infinite.
  IntMatrix pts(2, 1);
  pts << -1, 2;
  const Target frozen =
      make_lattice_pmf(pts, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  const SymmetrizationFactors sf =
      symmetrization_factors(frozen, symmetric_pair_step(1), 2.0);
  ck.expect(std::isinf(sf.alpha), "frozen-chain target factor is not infinite");
}

// --------------------------------------------------------------------------
// 10. Lattice formulas against the transition-matrix oracle.

void lattice_formula_oracle(Checker& ck) {
  std::mt19937_64 rng(424242u);
  for (int it = 0; it < 200 && ck.ok; ++it) {
    const auto c = mhb_test::random_lattice_case(rng, 7);
    const auto& lt = std::get<LatticeTarget>(c.target);
    const RationalChain chain = build_kernel(lt, c.step);
    const auto st = exact_lag_stats(chain, 1, {1, 2, 3});
    for (std::size_t i = 0; i < 3; ++i) {
      const unsigned r = static_cast<unsigned>(i + 1);
      const double formula = to_double(incr_moment_rwmh_exact(lt, c.step, r));
      const double oracle = to_double(st.incr_moments[i]);
      ck.expect(std::abs(formula - oracle) <= 1e-12 * (1.0 + std::abs(oracle)),
                "formula and oracle disagree at case " + std::to_string(it) +
                    ", order " + std::to_string(r));
    }
    const ChainSpec spec = make_chain(c.target, c.step);
    ck.expect(check_general_bound(spec, 2.0, mean_vector(spec.target)).pass,
              "pair bound fails at case " + std::to_string(it));
  }

  // Equality fixtures close with margin exactly zero.
  const ChainSpec pair = opposite_pair_chain();
  const auto& pair_lt = std::get<LatticeTarget>(pair.target);
  for (unsigned r : {2u, 3u, 4u}) {
    // E|X_0|^r = 1 for the +-1 pair, so the bound side is exactly 2^(r-1).
    const Rational margin =
        pow2(r - 1) - incr_moment_rwmh_exact(pair_lt, pair.proposal, r);
    ck.expect(margin == 0, "pair-equality margin is nonzero at r = " + std::to_string(r));
  }
  const Target t5 = make_lattice_uniform(2);
  const RationalChain five =
      build_kernel(std::get<LatticeTarget>(t5), symmetric_pair_step(3));
  const Rational floor_margin =
      exact_lag_stats(five, 1, {}).tr_corr - Rational(1, 10);
  ck.expect(floor_margin == 0, "odd-step correlation floor margin is nonzero");
}

struct Criterion {
  const char* name;
  double limit_seconds;  // 0 means no budget
  std::function<void(Checker&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"exact rational fixtures", 1.0, exact_rational_fixtures},
      {"extremal scan against brute force", 10.0, extremal_scan_vs_brute},
      {"doubling asymptote of the extremal constant", 30.0, doubling_asymptote},
      {"sequence-lemma fuzz and equality classification", 60.0, sequence_lemma_fuzz},
      {"continuous closed forms, bounds, and a long simulation", 0.0,
       continuous_chain_checks},
      {"sharpness ladder for the distant two-sided step", 5.0, sharpness_ladder},
      {"even-lag positivity on random reversible kernels", 10.0, even_lag_positivity},
      {"normal reference curve", 30.0, normal_reference_curve},
      {"two-point symmetrization constructors", 1.0, two_point_constructors},
      {"lattice formulas against the transition-matrix oracle", 20.0,
       lattice_formula_oracle},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    Checker ck;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(ck);
    } catch (const std::exception& e) {
      ck.expect(false, std::string("unexpected exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && elapsed > c.limit_seconds) {
      ck.ok = false;
      std::ostringstream note;
      note << "runtime " << elapsed << "s exceeded the " << c.limit_seconds << "s budget";
      ck.notes.push_back(note.str());
    }
    std::printf("%s criterion %zu: %s (%.2fs)\n", ck.ok ? "PASS" : "FAIL", i + 1,
                c.name, elapsed);
    if (!ck.ok) {
      ++failed;
      for (const std::string& note : ck.notes) {
        std::printf("    - %s\n", note.c_str());
      }
    }
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
              criteria.size());
  return failed == 0 ? 0 : 1;
}
