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

#ifndef MHBOUNDS_QUADRATURE_HPP_
#define MHBOUNDS_QUADRATURE_HPP_

#include <functional>
#include <vector>

namespace mhb {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // accumulated error estimate
};

// Default relative tolerance for quadrature-backed operations.
inline constexpr double kDefaultTol = 1e-10;

// Adaptive Gauss-Kronrod integral of f over [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tol = kDefaultTol);

// Integrates over [points.front(), points.back()] splitting at every interior
// point. Integrands here are smooth between breakpoints but typically have
// kinks at them (min{...} crossings, support edges); splitting restores the
// fast convergence of the panel rule. Points are sorted and deduplicated.
QuadResult integrate_piecewise(const std::function<double(double)>& f,
                               std::vector<double> points,
                               double tol = kDefaultTol);

// Merges extra breakpoints lying inside [lo, hi] into {lo, hi}.
std::vector<double> clip_breakpoints(const std::vector<double>& extra,
                                     double lo, double hi);

}  // namespace mhb

#endif  // MHBOUNDS_QUADRATURE_HPP_
