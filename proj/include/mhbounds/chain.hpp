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

#ifndef MHBOUNDS_CHAIN_HPP_
#define MHBOUNDS_CHAIN_HPP_

#include "mhbounds/distributions.hpp"

namespace mhb {

// A stationary Metropolis-Hastings chain: target law plus proposal mechanism.
// The chain starts at X0 ~ target, so (X0, X1) is an exchangeable pair.
struct ChainSpec {
  Target target;
  Proposal proposal;
};

// Validates that target and proposal live on the same space (continuous vs
// lattice) and dimension, and that an explicit proposal matrix enumerates
// exactly the target support.
ChainSpec make_chain(Target target, Proposal proposal);

bool is_lattice(const ChainSpec& spec);

}  // namespace mhb

#endif  // MHBOUNDS_CHAIN_HPP_
