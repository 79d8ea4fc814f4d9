// Copyright 2026 The Proposal Programs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace propprog {

// Derives an independent child seed from a parent seed and an index using a
// SplitMix64-style mix. Replicated executions each receive derive_seed(seed,
// i), which makes every result a pure function of the master seed and the
// replication counts, independent of scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// A seeded random stream. All sampling in the library flows through this
// class so that draws are reproducible across platforms; no
// std::*_distribution is used anywhere.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();

  // Uniform on (0, 1); safe as a log or tan argument.
  double uniform_pos();

  // Uniform integer on the inclusive range [lo, hi], by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Standard normal via Box-Muller, one variate per call.
  double normal();

  // A stream seeded with derive_seed(seed(), index).
  RandomStream substream(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace propprog
