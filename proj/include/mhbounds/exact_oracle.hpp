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

#ifndef MHBOUNDS_EXACT_ORACLE_HPP_
#define MHBOUNDS_EXACT_ORACLE_HPP_

#include <vector>

#include "mhbounds/distributions.hpp"

namespace mhb {

// A finite-state Metropolis-Hastings chain with explicit stationary law pi,
// proposal matrix q, and transition kernel k = q * alpha with the rejection
// mass absorbed on the diagonal. Rows of q and k sum to one; pi is strictly
// positive on every enumerated state.
template <typename Scalar>
struct FiniteChain {
  IntMatrix states;  // one lattice point per row
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pi;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> q;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> k;
};

using RationalChain = FiniteChain<Rational>;
using DoubleChain = FiniteChain<double>;

// Assembles the kernel for a lattice target with a lattice step law, axis
// step law, or explicit proposal matrix. Proposal mass leading outside the
// enumerated support is treated as an automatic rejection (it stays on the
// diagonal of q). The exact overload requires exact rational inputs.
RationalChain build_kernel(const LatticeTarget& target, const Proposal& proposal);
DoubleChain build_kernel_double(const LatticeTarget& target,
                                const Proposal& proposal);

DoubleChain to_double_chain(const RationalChain& chain);

// Joint-law statistics of (X_0, X_lag) under stationarity, computed from
// diag(pi) * k^lag with no sampling error.
template <typename Scalar>
struct ExactLagStats {
  int lag = 0;
  std::vector<Scalar> incr_moments;  // E|X_lag - X_0|^r, one per order
  Scalar tr_cov{};
  Scalar tr_var{};
  Scalar tr_corr{};
  std::vector<Scalar> cov_linear;  // Cov(<c, X_0>, <c, X_lag>), one per c
};

// Exact orders must be integers; d > 1 additionally needs even orders so the
// distances are rational. Throws DegeneratePath when the chain has a single
// state (the correlation is then undefined).
ExactLagStats<Rational> exact_lag_stats(
    const RationalChain& chain, int lag, const std::vector<unsigned>& orders,
    const std::vector<std::vector<Rational>>& directions = {});

ExactLagStats<double> exact_lag_stats(const DoubleChain& chain, int lag,
                                      const std::vector<double>& orders,
                                      const std::vector<Vector>& directions = {});

// Largest detailed-balance violation max_ij |pi_i k_ij - pi_j k_ji|,
// reported as a double in both cases (exactly zero for exact kernels).
double check_reversibility(const RationalChain& chain);
double check_reversibility(const DoubleChain& chain);

// trVar(E[X_1 | X_0]), the exact value of the lag-2 total covariance.
Rational conditional_mean_trvar(const RationalChain& chain);
double conditional_mean_trvar(const DoubleChain& chain);

}  // namespace mhb

#endif  // MHBOUNDS_EXACT_ORACLE_HPP_
