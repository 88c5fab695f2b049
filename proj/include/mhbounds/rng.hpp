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

#ifndef MHBOUNDS_RNG_HPP_
#define MHBOUNDS_RNG_HPP_

#include <cstdint>

namespace mhb {

// Counter-based random stream: value(i) is a pure function of (seed, i), so a
// simulated path is reproducible bit-for-bit across platforms and runs, and
// any draw can be regenerated without replaying the stream. Each simulation
// step consumes a fixed block of counter positions (see mh_core.hpp), which
// keeps draw positions independent of acceptance decisions.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Raw 64-bit value at counter position `pos` (splitmix64 finalizer applied
  // to seed + (pos+1) * golden-gamma).
  std::uint64_t bits(std::uint64_t pos) const;

  // Uniform draw in the open interval (0, 1); never returns an endpoint, so
  // inverse-CDF transforms stay finite.
  double uniform(std::uint64_t pos) const;

  // Standard normal draw via the inverse CDF of uniform(pos).
  double normal(std::uint64_t pos) const;

 private:
  std::uint64_t seed_;
};

}  // namespace mhb

#endif  // MHBOUNDS_RNG_HPP_
