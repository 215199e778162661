// Copyright 2026 The tabeval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Portable seeded random number generation.
//
// Everything stochastic in the engine (bootstrap resampling, trajectory
// draws, synthetic stores) goes through xoshiro256** seeded with splitmix64,
// so that a seed reproduces the same stream on every platform and in every
// implementation of the format. Substreams are derived with derive_seed()
// rather than by sharing one generator, which keeps parallel and serial runs
// bit-identical.

#ifndef TABEVAL_RNG_HPP_
#define TABEVAL_RNG_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace tabeval {

// Advances `state` and returns the next splitmix64 output.
std::uint64_t splitmix64(std::uint64_t& state);

// Seed for substream `stream` of `seed`. Distinct (seed, stream) pairs give
// statistically independent generators.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// FNV-1a, used to turn names (dataset ids, config ids) into stream ids.
std::uint64_t hash_name(std::string_view name);

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);
  explicit Xoshiro256(const std::array<std::uint64_t, 4>& state)
      : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next(); }

  std::uint64_t next();
  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  // Unbiased integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  // Standard normal via Box-Muller (one value per call, no caching).
  double normal();

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace tabeval

#endif  // TABEVAL_RNG_HPP_
