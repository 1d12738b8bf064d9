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
#ifndef EDGEMARK_MEM_PLAN_HPP_
#define EDGEMARK_MEM_PLAN_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "edgemark/graph.hpp"
#include "edgemark/optimize.hpp"

namespace edgemark {

inline constexpr std::size_t kArenaAlignment = 16;

struct ArenaEntry {
  int tensor_id = -1;  // -1 for per-node scratch
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
  int first_node = 0;  // inclusive node-index lifetime
  int last_node = 0;
};

struct AllocationPlan {
  std::vector<ArenaEntry> entries;
  std::size_t peak = 0;  // max(offset + size), no trailing padding
};

// Integer-only variants exchange host-owned integer I/O buffers, so their
// graph input/output live outside the arena; everything else plans them in.
bool io_in_arena(const VariantDescriptor& vd);

// Greedy offset planner. Entries are activation tensors (lifetime: producer
// node through last consumer; the graph input is [0, 0] style, alive until
// its last reader) plus per-node scratch ([i, i]). Placement order is size
// descending, ties by earlier first use then lower tensor id; each entry
// takes the lowest 16-byte-aligned offset that does not overlap any placed
// entry with an intersecting lifetime.
AllocationPlan plan_arena(const Graph& g, const VariantDescriptor& vd);

// Working-memory estimate: the largest input+output byte sum over the node
// chain (boundary tensors included), plus the backend's fixed arena
// overhead, rounded up to `resolution`.
std::size_t estimate_arena(const Graph& g, std::size_t backend_overhead,
                           std::size_t resolution);

// Search resolution by estimated size: 512 B below 32 KiB, 1 KiB up to
// 128 KiB, 2 KiB beyond.
std::size_t select_resolution(std::size_t estimate_bytes);

enum class TrialOutcome {
  kTooLow,   // the runtime failed to allocate within the arena
  kCorrect,  // deployment succeeded
  kTooHigh,  // the arena itself no longer fits the device
};

struct ArenaSearchParams {
  double growth_rate = 1.25;
  double shrink_rate = 0.8;
  std::size_t growth_step = 4;  // resolution units
  std::size_t shrink_step = 4;
  std::size_t resolution = 512;  // bytes per unit
  std::size_t max_trials = 256;
};

struct ArenaTrial {
  std::size_t guess_units = 0;
  std::size_t guess_bytes = 0;
  TrialOutcome outcome = TrialOutcome::kTooLow;
};

struct ArenaSearchResult {
  std::size_t best_bytes = 0;
  std::vector<ArenaTrial> log;
  std::size_t trials() const { return log.size(); }
};

using ArenaTrialFn = std::function<TrialOutcome(std::size_t bytes)>;

// Minimum-arena search. Starts from the estimate (in resolution units),
// grows by max(rate, +step) while too low, shrinks by min(rate, -step) while
// feasible, then bisects the bracket; the answer is the smallest unit count
// whose trial reported kCorrect. Throws Error{kInfeasible} when the bracket
// closes without any feasible size and Error{kNonMonotone} when trial
// outcomes contradict a monotone oracle.
ArenaSearchResult find_min_arena(const ArenaTrialFn& trial,
                                 std::size_t estimate_bytes,
                                 const ArenaSearchParams& params);

}  // namespace edgemark

#endif  // EDGEMARK_MEM_PLAN_HPP_
