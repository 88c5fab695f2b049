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

#ifndef MHBOUNDS_MH_CORE_HPP_
#define MHBOUNDS_MH_CORE_HPP_

#include <cstdint>
#include <vector>

#include "mhbounds/chain.hpp"
#include "mhbounds/rng.hpp"

namespace mhb {

// min{1, pi(y) q(y, x) / (pi(x) q(x, y))}, with alpha = 1 whenever the
// forward flow pi(x) q(x, y) vanishes.
double acceptance_prob(const ChainSpec& spec, const Vector& x, const Vector& y);

struct Path {
  Eigen::MatrixXd points;  // row t is X_t, so n transitions give n+1 rows
  std::uint64_t seed = 0;
};

// Simulates n transitions from X_0 ~ target. Draws are counter-based with a
// fixed position layout (initial point, then one block per step), so the
// path is a pure function of (spec, n, seed) regardless of platform.
// Throws UnsupportedSampler for target kinds without a direct sampler.
Path simulate(const ChainSpec& spec, std::size_t n, std::uint64_t seed);

struct LagEstimate {
  int lag = 0;
  // Pooled over both pair endpoints, so the decomposition
  //   tr_cov = pooled_var - incr2 / 2
  // holds exactly in floating point up to rounding.
  double pooled_var = 0.0;
  double tr_cov = 0.0;
  double se_tr_cov = 0.0;
  double tr_corr = 0.0;
  double se_tr_corr = 0.0;
  std::vector<double> incr_moments;
  std::vector<double> se_incr;
  std::vector<double> cov_linear;
  std::vector<double> se_linear;
  // tr_cov - (pooled_var - incr2 / 2); rounding-level by construction.
  double sq_identity_residual = 0.0;
};

struct PathStats {
  std::vector<LagEstimate> lags;
};

// Pooled pair estimators at each requested lag, with batch-means standard
// errors (sqrt(M) batches over the M overlapping pairs; mean-term noise in
// the covariances is second order and folded into the same estimate).
// Throws DegeneratePath when a lag leaves fewer than two pairs or the
// pooled variance vanishes.
PathStats path_stats(const Path& path, const std::vector<int>& lags,
                     const std::vector<double>& orders,
                     const std::vector<Vector>& directions = {});

}  // namespace mhb

#endif  // MHBOUNDS_MH_CORE_HPP_
