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
#include "edgemark/mem_plan.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "edgemark/error.hpp"

namespace edgemark {
namespace {

std::size_t align_up(std::size_t v, std::size_t a) {
  return (v + a - 1) / a * a;
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

bool io_in_arena(const VariantDescriptor& vd) {
  return !scheme_is_int_only(vd.scheme);
}

AllocationPlan plan_arena(const Graph& g, const VariantDescriptor& vd) {
  const bool with_io = io_in_arena(vd);
  const int n_nodes = static_cast<int>(g.nodes.size());

  struct Lifetime {
    int first = -1;
    int last = -1;
  };
  std::vector<Lifetime> life(g.tensors.size());
  for (int i = 0; i < n_nodes; ++i) {
    const OpNode& node = g.nodes[i];
    Lifetime& out = life[node.output];
    out.first = i;
    out.last = std::max(out.last, i);
    Lifetime& in = life[node.input];
    if (in.first < 0) in.first = std::max(0, i);  // graph input
    in.last = std::max(in.last, i);
  }

  std::vector<ArenaEntry> entries;
  for (const auto& t : g.tensors) {
    if (t.is_param()) continue;
    if (!with_io &&
        (t.role == TensorRole::kInput || t.role == TensorRole::kOutput)) {
      continue;
    }
    if (life[t.id].first < 0) continue;
    ArenaEntry e;
    e.tensor_id = t.id;
    e.name = t.name;
    e.size = t.bytes();
    e.first_node = life[t.id].first;
    e.last_node = life[t.id].last;
    entries.push_back(std::move(e));
  }
  for (int i = 0; i < n_nodes; ++i) {
    const OpNode& node = g.nodes[i];
    if (node.scratch_elems <= 0) continue;
    ArenaEntry e;
    e.name = node.name + "_scratch";
    e.size = static_cast<std::size_t>(node.scratch_elems) *
             dtype_size(g.tensor(node.output).dtype);
    e.first_node = i;
    e.last_node = i;
    entries.push_back(std::move(e));
  }

  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (entries[a].size != entries[b].size) {
      return entries[a].size > entries[b].size;
    }
    if (entries[a].first_node != entries[b].first_node) {
      return entries[a].first_node < entries[b].first_node;
    }
    return entries[a].tensor_id < entries[b].tensor_id;
  });

  AllocationPlan plan;
  std::vector<std::size_t> placed;  // indices into entries, already placed
  for (std::size_t oi : order) {
    ArenaEntry& e = entries[oi];
    std::vector<std::size_t> overlap;
    for (std::size_t pi : placed) {
      const ArenaEntry& p = entries[pi];
      if (p.first_node <= e.last_node && e.first_node <= p.last_node) {
        overlap.push_back(pi);
      }
    }
    std::sort(overlap.begin(), overlap.end(), [&](std::size_t a, std::size_t b) {
      return entries[a].offset < entries[b].offset;
    });
    std::size_t offset = 0;
    for (std::size_t pi : overlap) {
      const ArenaEntry& p = entries[pi];
      if (offset + e.size <= p.offset) break;
      offset = std::max(offset, align_up(p.offset + p.size, kArenaAlignment));
    }
    e.offset = offset;
    placed.push_back(oi);
    plan.peak = std::max(plan.peak, e.offset + e.size);
  }
  plan.entries = std::move(entries);
  std::sort(plan.entries.begin(), plan.entries.end(),
            [](const ArenaEntry& a, const ArenaEntry& b) {
              if (a.first_node != b.first_node) return a.first_node < b.first_node;
              return a.offset < b.offset;
            });
  return plan;
}

std::size_t estimate_arena(const Graph& g, std::size_t backend_overhead,
                           std::size_t resolution) {
  if (resolution < 1) {
    throw Error(ErrKind::kValidation, "resolution must be >= 1");
  }
  std::size_t worst = 0;
  std::size_t prev = g.input().bytes();
  for (const auto& node : g.nodes) {
    const std::size_t out = g.tensor(node.output).bytes();
    worst = std::max(worst, prev + out);
    prev = out;
  }
  return ceil_div(worst + backend_overhead, resolution) * resolution;
}

std::size_t select_resolution(std::size_t estimate_bytes) {
  if (estimate_bytes < 32 * 1024) return 512;
  if (estimate_bytes <= 128 * 1024) return 1024;
  return 2048;
}

ArenaSearchResult find_min_arena(const ArenaTrialFn& trial,
                                 std::size_t estimate_bytes,
                                 const ArenaSearchParams& params) {
  if (params.resolution < 1) {
    throw Error(ErrKind::kValidation, "resolution must be >= 1");
  }
  const std::size_t res = params.resolution;

  std::optional<std::size_t> lower, upper, best;
  // Monotonicity witnesses.
  std::optional<std::size_t> max_toolow, min_correct, max_correct, min_toohigh;

  ArenaSearchResult result;
  std::size_t guess = std::max<std::size_t>(1, ceil_div(estimate_bytes, res));

  while (result.log.size() < params.max_trials) {
    const TrialOutcome outcome = trial(guess * res);
    result.log.push_back({guess, guess * res, outcome});

    switch (outcome) {
      case TrialOutcome::kTooLow:
        max_toolow = std::max(max_toolow.value_or(0), guess);
        lower = std::max(lower.value_or(0), guess);
        break;
      case TrialOutcome::kCorrect:
        min_correct = std::min(min_correct.value_or(guess), guess);
        max_correct = std::max(max_correct.value_or(0), guess);
        best = std::min(best.value_or(guess), guess);
        upper = std::min(upper.value_or(guess), guess);
        break;
      case TrialOutcome::kTooHigh:
        min_toohigh = std::min(min_toohigh.value_or(guess), guess);
        upper = std::min(upper.value_or(guess), guess);
        break;
    }
    if ((max_toolow && min_correct && *max_toolow >= *min_correct) ||
        (max_toolow && min_toohigh && *max_toolow >= *min_toohigh) ||
        (max_correct && min_toohigh && *max_correct >= *min_toohigh)) {
      throw Error(ErrKind::kNonMonotone,
                  "arena trial outcomes are not monotone in the arena size");
    }

    // A successful one-unit arena has an implicit failing bound at zero.
    if (!lower && upper && *upper == 1) lower = 0;

    if (lower && upper) {
      if (*upper <= *lower) {
        throw Error(ErrKind::kNonMonotone, "arena search bounds crossed");
      }
      if (*upper - *lower == 1) {
        if (best && *best == *upper) {
          result.best_bytes = *best * res;
          return result;
        }
        throw Error(ErrKind::kInfeasible,
                    "no feasible arena size: the smallest allocatable arena "
                    "does not fit the device");
      }
      guess = (*lower + *upper) / 2;
    } else if (lower) {
      const auto by_rate = static_cast<std::size_t>(
          std::ceil(static_cast<double>(*lower) * params.growth_rate));
      guess = std::max(by_rate, *lower + params.growth_step);
    } else {
      const std::size_t u = *upper;
      auto next = static_cast<std::size_t>(
          std::floor(static_cast<double>(u) * params.shrink_rate));
      if (u >= params.shrink_step) next = std::min(next, u - params.shrink_step);
      if (next < 1) next = 1;
      if (next >= u) {
        throw Error(ErrKind::kInfeasible,
                    "no feasible arena size: even the smallest arena is too "
                    "large for the device");
      }
      guess = next;
    }
  }
  throw Error(ErrKind::kNonMonotone,
              "arena search exceeded the trial budget without converging");
}

}  // namespace edgemark
