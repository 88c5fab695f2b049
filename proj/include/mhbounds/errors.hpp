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

#ifndef MHBOUNDS_ERRORS_HPP_
#define MHBOUNDS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mhb {

// Base class for every error thrown by this library. Each concrete error
// corresponds to one failure mode named in the module contracts, so tests and
// the CLI can catch exactly the condition they expect.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define MHB_DEFINE_ERROR(NAME)                                   \
  class NAME : public Error {                                    \
   public:                                                       \
    explicit NAME(const std::string& what) : Error(what) {}      \
  }

// Construction / validation failures.
MHB_DEFINE_ERROR(MassError);            // density or pmf mass is not 1
MHB_DEFINE_ERROR(SupportMismatch);      // proposal/kernel support inconsistent
MHB_DEFINE_ERROR(DimensionMismatch);    // operands live in different dimensions
MHB_DEFINE_ERROR(PreconditionFailed);   // a structural flag required by an op is absent
MHB_DEFINE_ERROR(NotSymmetric);         // op requires a symmetric proposal
MHB_DEFINE_ERROR(ZeroVector);           // linear-combination ops need c != 0
MHB_DEFINE_ERROR(RangeError);           // parameter outside an inequality's admissible range
MHB_DEFINE_ERROR(OutOfRange);           // constructor target value outside the achievable set
MHB_DEFINE_ERROR(NonIntegrable);        // requested moment is infinite
MHB_DEFINE_ERROR(BothZero);             // symmetrization factor 0/0, excluded by assumption
MHB_DEFINE_ERROR(NotReversible);        // kernel fails detailed balance
MHB_DEFINE_ERROR(DegeneratePath);       // sample trace-variance is zero
MHB_DEFINE_ERROR(UnsupportedSampler);   // target kind has no direct sampler
MHB_DEFINE_ERROR(ToleranceNotMet);      // quadrature error estimate above tolerance
MHB_DEFINE_ERROR(ClassificationFailure);// zero gap matched no enumerated equality case
MHB_DEFINE_ERROR(PatternViolation);     // unimodality sign pattern broken
MHB_DEFINE_ERROR(ConfigError);          // bad scenario config (unknown key, missing field)

#undef MHB_DEFINE_ERROR

}  // namespace mhb

#endif  // MHBOUNDS_ERRORS_HPP_
