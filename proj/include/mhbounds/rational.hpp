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

#ifndef MHBOUNDS_RATIONAL_HPP_
#define MHBOUNDS_RATIONAL_HPP_

#include <string>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include "mhbounds/errors.hpp"

namespace mhb {

// Exact rational scalar used for all lattice computations. Equality fixtures
// such as 9/5, 18/5, and 1/10 must reproduce exactly, so every pmf, kernel
// entry, and lattice moment is carried in this type whenever the inputs are
// rational.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Parses "a/b", "a", or a finite decimal like "-0.125" into an exact
// rational. Decimals are expanded over a power of ten, never rounded.
Rational parse_rational(const std::string& text);

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Exact integer power with nonnegative exponent.
Rational rational_pow(const Rational& base, unsigned exponent);

// Renders in canonical "a/b" (or "a" for integers) form.
std::string rational_to_string(const Rational& q);

}  // namespace mhb

#endif  // MHBOUNDS_RATIONAL_HPP_
