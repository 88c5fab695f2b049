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

#include "mhbounds/exact_oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

namespace mhb {

namespace {

// Proposal offsets with scalar masses, extracted from any lattice step kind.
template <typename Scalar>
struct OffsetPmf {
  std::vector<Eigen::VectorXi> offsets;
  std::vector<Scalar> mass;
};

template <typename Scalar>
Scalar mass_cast(const Rational& m) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return m;
  } else {
    return to_double(m);
  }
}

template <typename Scalar>
OffsetPmf<Scalar> offset_pmf(const Proposal& proposal, int dim, bool need_exact) {
  OffsetPmf<Scalar> out;
  if (const auto* step = std::get_if<LatticeStep>(&proposal)) {
    if (step->points.cols() != dim) {
      throw DimensionMismatch("step dimension mismatch");
    }
    if (need_exact && !step->exact) {
      throw PreconditionFailed("step pmf is not exact");
    }
    for (Eigen::Index i = 0; i < step->points.rows(); ++i) {
      out.offsets.push_back(step->points.row(i).transpose());
      if constexpr (std::is_same_v<Scalar, Rational>) {
        out.mass.push_back(step->mass_q[static_cast<std::size_t>(i)]);
      } else {
        out.mass.push_back(step->mass[static_cast<std::size_t>(i)]);
      }
    }
    return out;
  }
  if (const auto* axis = std::get_if<AxisOddStep>(&proposal)) {
    if (axis->dim != dim) throw DimensionMismatch("step dimension mismatch");
    for (const auto& mv : axis->moves) {
      Eigen::VectorXi z = Eigen::VectorXi::Zero(dim);
      z[mv.axis] = static_cast<int>(mv.offset);
      out.offsets.push_back(std::move(z));
      out.mass.push_back(mass_cast<Scalar>(mv.weight));
    }
    return out;
  }
  throw SupportMismatch("proposal does not live on the lattice");
}

template <typename Scalar>
FiniteChain<Scalar> build_impl(const LatticeTarget& target,
                               const Proposal& proposal) {
  constexpr bool exact = std::is_same_v<Scalar, Rational>;
  if (exact && !target.exact) throw PreconditionFailed("target pmf is not exact");
  const auto n = target.points.rows();
  const int dim = static_cast<int>(target.points.cols());

  FiniteChain<Scalar> chain;
  chain.states = target.points;
  chain.pi.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if constexpr (exact) {
      chain.pi[i] = target.mass_q[static_cast<std::size_t>(i)];
    } else {
      chain.pi[i] = target.mass[static_cast<std::size_t>(i)];
    }
  }

  chain.q.setZero(n, n);
  if (const auto* eq = std::get_if<ExplicitLatticeQ>(&proposal)) {
    if (eq->states.rows() != n || eq->states.cols() != dim ||
        eq->states != target.points) {
      throw SupportMismatch("explicit proposal states must match the target support");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar row_sum = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        chain.q(i, j) = mass_cast<Scalar>(
            eq->q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        row_sum += chain.q(i, j);
      }
      if constexpr (exact) {
        if (row_sum != 1) throw MassError("proposal rows must sum to one");
      }
    }
  } else {
    const auto pmf = offset_pmf<Scalar>(proposal, dim, exact);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXi x = target.points.row(i).transpose();
      for (std::size_t s = 0; s < pmf.offsets.size(); ++s) {
        const long j = find_point(target.points, x + pmf.offsets[s]);
        if (j >= 0) chain.q(i, j) += pmf.mass[s];
      }
      // Off-support proposals are immediate rejections; keep their mass on
      // the diagonal so rows stay stochastic.
      Scalar off = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i) off += chain.q(i, j);
      }
      chain.q(i, i) = Scalar(1) - off;
    }
  }

  chain.k.setZero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar moved = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const Scalar flow = chain.pi[i] * chain.q(i, j);
      if (flow > 0) {
        const Scalar ratio = chain.pi[j] * chain.q(j, i) / flow;
        chain.k(i, j) = chain.q(i, j) * (ratio < 1 ? ratio : Scalar(1));
      }
      moved += chain.k(i, j);
    }
    chain.k(i, i) = Scalar(1) - moved;
  }
  return chain;
}

template <typename Scalar>
Scalar int_pow(Scalar base, unsigned e) {
  Scalar acc(1);
  while (e != 0) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

template <typename Scalar, typename Order>
Scalar dist_pow(const Eigen::VectorXi& a, const Eigen::VectorXi& b, Order r) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    const long sq = (a - b).squaredNorm();
    if (a.size() == 1) {
      return int_pow(Rational(std::abs(a[0] - b[0])), r);
    }
    if (r % 2 != 0) {
      throw PreconditionFailed("d > 1 exact increments need even orders");
    }
    return int_pow(Rational(sq), r / 2);
  } else {
    return std::pow(std::sqrt(static_cast<double>((a - b).squaredNorm())),
                    static_cast<double>(r));
  }
}

template <typename Scalar, typename Order, typename Dir>
ExactLagStats<Scalar> stats_impl(const FiniteChain<Scalar>& chain, int lag,
                                 const std::vector<Order>& orders,
                                 const std::vector<Dir>& directions) {
  if (lag < 0) throw RangeError("lag must be nonnegative");
  const auto n = chain.states.rows();
  const int dim = static_cast<int>(chain.states.cols());
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Mat kt = Mat::Identity(n, n);
  for (int t = 0; t < lag; ++t) kt = (kt * chain.k).eval();

  // State coordinates as scalars and the stationary mean.
  Mat xs(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) xs(i, j) = Scalar(chain.states(i, j));
  }
  Vec mu = Vec::Zero(dim);
  Scalar second = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    mu += chain.pi[i] * xs.row(i).transpose();
    second += chain.pi[i] * Scalar(chain.states.row(i).squaredNorm());
  }

  ExactLagStats<Scalar> out;
  out.lag = lag;
  out.tr_var = second - mu.dot(mu);
  Scalar cross = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Scalar w = chain.pi[i] * kt(i, j);
      if (w == 0) continue;
      cross += w * xs.row(i).dot(xs.row(j));
    }
  }
  out.tr_cov = cross - mu.dot(mu);
  if (out.tr_var == 0) {
    throw DegeneratePath("single-state chain has no correlation");
  }
  out.tr_corr = out.tr_cov / out.tr_var;

  for (const Order r : orders) {
    Scalar acc = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const Scalar w = chain.pi[i] * kt(i, j);
        if (w == 0 || i == j) continue;
        acc += w * dist_pow<Scalar>(chain.states.row(i).transpose(),
                                    chain.states.row(j).transpose(), r);
      }
    }
    out.incr_moments.push_back(acc);
  }

  for (const Dir& c : directions) {
    if (static_cast<int>(c.size()) != dim) {
      throw DimensionMismatch("direction dimension mismatch");
    }
    Vec cv(dim);
    for (int j = 0; j < dim; ++j) cv[j] = Scalar(c[static_cast<std::size_t>(j)]);
    Scalar mean_c = cv.dot(mu);
    Scalar acc = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar ci = cv.dot(xs.row(i).transpose());
      for (Eigen::Index j = 0; j < n; ++j) {
        const Scalar w = chain.pi[i] * kt(i, j);
        if (w == 0) continue;
        acc += w * ci * cv.dot(xs.row(j).transpose());
      }
    }
    out.cov_linear.push_back(acc - mean_c * mean_c);
  }
  return out;
}

template <typename Scalar>
double reversibility_impl(const FiniteChain<Scalar>& chain) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < chain.k.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < chain.k.cols(); ++j) {
      const Scalar diff =
          chain.pi[i] * chain.k(i, j) - chain.pi[j] * chain.k(j, i);
      double d;
      if constexpr (std::is_same_v<Scalar, Rational>) {
        d = to_double(diff);
      } else {
        d = diff;
      }
      worst = std::max(worst, std::abs(d));
    }
  }
  return worst;
}

template <typename Scalar>
Scalar cond_mean_impl(const FiniteChain<Scalar>& chain) {
  const auto n = chain.states.rows();
  const int dim = static_cast<int>(chain.states.cols());
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vec mu = Vec::Zero(dim);
  Scalar second = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec vi = Vec::Zero(dim);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (chain.k(i, j) == 0) continue;
      for (int c = 0; c < dim; ++c) {
        vi[c] += chain.k(i, j) * Scalar(chain.states(j, c));
      }
    }
    mu += chain.pi[i] * vi;
    second += chain.pi[i] * vi.dot(vi);
  }
  return second - mu.dot(mu);
}

}  // namespace

RationalChain build_kernel(const LatticeTarget& target, const Proposal& proposal) {
  return build_impl<Rational>(target, proposal);
}

DoubleChain build_kernel_double(const LatticeTarget& target,
                                const Proposal& proposal) {
  return build_impl<double>(target, proposal);
}

DoubleChain to_double_chain(const RationalChain& chain) {
  DoubleChain out;
  out.states = chain.states;
  out.pi = chain.pi.unaryExpr([](const Rational& v) { return to_double(v); });
  out.q = chain.q.unaryExpr([](const Rational& v) { return to_double(v); });
  out.k = chain.k.unaryExpr([](const Rational& v) { return to_double(v); });
  return out;
}

ExactLagStats<Rational> exact_lag_stats(
    const RationalChain& chain, int lag, const std::vector<unsigned>& orders,
    const std::vector<std::vector<Rational>>& directions) {
  return stats_impl(chain, lag, orders, directions);
}

ExactLagStats<double> exact_lag_stats(const DoubleChain& chain, int lag,
                                      const std::vector<double>& orders,
                                      const std::vector<Vector>& directions) {
  std::vector<std::vector<double>> dirs;
  for (const auto& c : directions) {
    dirs.emplace_back(c.data(), c.data() + c.size());
  }
  return stats_impl(chain, lag, orders, dirs);
}

double check_reversibility(const RationalChain& chain) {
  return reversibility_impl(chain);
}

double check_reversibility(const DoubleChain& chain) {
  return reversibility_impl(chain);
}

Rational conditional_mean_trvar(const RationalChain& chain) {
  return cond_mean_impl(chain);
}

double conditional_mean_trvar(const DoubleChain& chain) {
  return cond_mean_impl(chain);
}

}  // namespace mhb
