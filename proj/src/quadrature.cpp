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

#include "mhbounds/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace mhb {

namespace {
using Gk = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr int kMaxDepth = 14;
}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tol) {
  QuadResult out;
  if (!(a < b)) return out;
  double err = 0.0;
  out.value = Gk::integrate(f, a, b, kMaxDepth, tol, &err);
  out.error = err;
  return out;
}

QuadResult integrate_piecewise(const std::function<double(double)>& f,
                               std::vector<double> points, double tol) {
  QuadResult out;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 2) return out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const QuadResult piece = integrate(f, points[i], points[i + 1], tol);
    out.value += piece.value;
    out.error += piece.error;
  }
  return out;
}

std::vector<double> clip_breakpoints(const std::vector<double>& extra,
                                     double lo, double hi) {
  std::vector<double> points{lo, hi};
  for (double x : extra) {
    if (x > lo && x < hi) points.push_back(x);
  }
  return points;
}

}  // namespace mhb
