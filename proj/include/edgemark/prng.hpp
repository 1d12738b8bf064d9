/* Copyright 2026 The EdgeMark Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef EDGEMARK_PRNG_HPP_
#define EDGEMARK_PRNG_HPP_

#include <cstdint>

namespace edgemark {

// SplitMix64. Chosen over std::mt19937 because the output sequence is fully
// specified by the recurrence below, so generated weights and datasets are
// reproducible across standard libraries and platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  float uniform(float lo, float hi) {
    return lo + static_cast<float>((hi - lo) * next_double());
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed for substream `ordinal` of `base`.
// Distinct ordinals land in well separated regions of the SplitMix64 cycle.
inline std::uint64_t substream_seed(std::uint64_t base, std::uint64_t ordinal) {
  SplitMix64 g(base ^ (0x632be59bd9b4e019ULL * (ordinal + 1)));
  return g.next_u64();
}

}  // namespace edgemark

#endif  // EDGEMARK_PRNG_HPP_
