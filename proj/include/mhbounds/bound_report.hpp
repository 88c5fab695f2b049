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

#ifndef MHBOUNDS_BOUND_REPORT_HPP_
#define MHBOUNDS_BOUND_REPORT_HPP_

#include <string>

namespace mhb {

// Outcome of checking one inequality on one instance.
//
// Rows are oriented so that the inequality under test reads lhs <= rhs and
// margin = rhs - lhs; a nonnegative margin means the inequality holds.  For
// lower bounds the bound goes on the lhs and the chain quantity on the rhs,
// so the orientation convention is uniform.
struct BoundReport {
  std::string theorem_id;
  double r = 0.0;
  int lag = 1;  // lag of the joint law the row talks about
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  // True when the theory promises strict inequality for this instance class,
  // false when equality is attainable.
  bool strict_expected = false;
  bool pass = false;
  // "exact", "quadrature", "closed-form", "simulation", "skipped", ...
  std::string method;
  // Certified numerical slack: pass <=> margin >= -error_bound.
  double error_bound = 0.0;
  // Free-form annotation (equality witnesses, skip reasons).
  std::string note;
};

inline bool bound_pass(double margin, double error_bound) {
  return margin >= -error_bound;
}

}  // namespace mhb

#endif  // MHBOUNDS_BOUND_REPORT_HPP_
