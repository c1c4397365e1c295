/*
 * Copyright 2026 The emoseq Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>

namespace emoseq {

// xorshift64* (Vigna 2016): state ^= state >> 12; state ^= state << 25;
// state ^= state >> 27; output = state * 0x2545F4914F6CDD1D.
// The 64-bit seed is expanded through one SplitMix64 round (increment
// 0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB)
// so that seed 0 yields a valid non-zero state. Every random draw in the
// library goes through this generator so runs are reproducible across
// platforms and implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double next_double();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Independent stream seeds derived from one run seed.
enum class Stream : std::uint64_t { kSplit = 1, kInit = 2, kShuffle = 3, kCorpus = 4 };
std::uint64_t derive_seed(std::uint64_t seed, Stream stream);

}  // namespace emoseq
