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
#ifndef EDGEMARK_DEVICE_SIM_HPP_
#define EDGEMARK_DEVICE_SIM_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edgemark/dataset.hpp"
#include "edgemark/graph.hpp"
#include "edgemark/mem_plan.hpp"
#include "edgemark/optimize.hpp"

namespace edgemark {

// Work classes of the cycle cost model. Every node decomposes into work
// items of (class, dtype, element count); see node_work.
enum class OpClass { kMac, kPool, kAct, kActExp, kEltwise, kCopy, kRequant };
const char* op_class_name(OpClass c);
inline constexpr int kOpClassCount = 7;

// Per-element cycle costs for one work class. The f32 pair covers hardware
// FPU vs soft-float emulation; integer pairs cover SIMD-accelerated vs plain
// scalar kernels. Soft-float penalties must stay within [1.85x, 9.5x].
struct ClassCost {
  double f32_fpu = 1.0;
  double f32_soft = 4.0;
  double i8_simd = 0.5;
  double i8_plain = 1.0;
  double i16_simd = 0.75;
  double i16_plain = 1.5;

  bool operator==(const ClassCost&) const = default;
};

struct CycleTable {
  ClassCost classes[kOpClassCount];

  const ClassCost& of(OpClass c) const { return classes[static_cast<int>(c)]; }
  ClassCost& of(OpClass c) { return classes[static_cast<int>(c)]; }
  double cost(OpClass c, DType dtype, bool fpu, bool int_simd) const;
  // soft / fpu penalty ratio for a class.
  double soft_penalty(OpClass c) const;

  bool operator==(const CycleTable&) const = default;
};

struct OptLevelSpec {
  std::string name = "O3";
  double speed_multiplier = 1.0;  // > 1 is faster
  double flash_multiplier = 1.0;  // scales backend base flash

  bool operator==(const OptLevelSpec&) const = default;
};

// O-levels selectable in a device profile: Os, O3, Ofast.
std::optional<OptLevelSpec> opt_level_by_name(const std::string& name);

struct DeviceProfile {
  std::string name;
  double clock_hz = 120e6;
  bool fpu = true;
  bool int8_simd = true;
  std::size_t flash_capacity = 0;
  std::size_t ram_capacity = 0;
  double per_op_overhead_cycles = 40.0;
  // Cycle factor on weight-bound work when parameters live in RAM.
  double ram_param_cycle_factor = 1.0;
  OptLevelSpec opt;
  CycleTable cycles;

  bool operator==(const DeviceProfile&) const = default;
  std::uint64_t content_hash() const;
};

enum class BackendStyle { kInterpreter, kDirect };
enum class ParamPlacement { kRom, kRam };

struct BackendProfile {
  std::string name;
  BackendStyle style = BackendStyle::kInterpreter;
  std::size_t base_flash = 0;
  std::size_t base_ram = 0;
  // Interpreter bookkeeping placed inside the tensor arena.
  std::size_t arena_overhead = 0;
  std::size_t per_op_code_bytes = 400;
  std::map<Scheme, std::size_t> scheme_code_bytes;
  std::set<Scheme> supported_schemes;
  bool supports_rnn = true;
  bool regression_only = false;
  // Op kinds (by op_kind_name) this backend can lower; empty means all.
  std::set<std::string> supported_ops;
  // Activation functions supported; empty means all.
  std::set<std::string> supported_activations;
  ParamPlacement param_placement = ParamPlacement::kRom;
  // Devices on which this backend ships SIMD integer kernels.
  std::set<std::string> accel_int8_on;

  bool operator==(const BackendProfile&) const = default;
  std::uint64_t content_hash() const;
};

struct ProfileSet {
  std::vector<DeviceProfile> devices;
  std::vector<BackendProfile> backends;

  const DeviceProfile* device(const std::string& name) const;
  const BackendProfile* backend(const std::string& name) const;
};

// Built-in profiles: devices cm4f-sim / rxv2-sim and backends
// interpreter-rt / compiled-rt / crystal-rt / vendor-rt.
ProfileSet default_profiles();
// Loads a profile YAML (devices: [...], backends: [...]). Unknown keys and
// out-of-band soft-float penalties are validation errors.
ProfileSet load_profiles(const std::filesystem::path& path);

// A structured reason why a (model, variant) cannot target a backend.
struct Incompatibility {
  std::string kind;    // "scheme" | "rnn" | "regression_only" | "op"
  std::string detail;

  std::string to_string() const;
};

// Checks a model/variant against a backend's declared capabilities. Runs on
// the base float graph; variant-induced boundary ops are implied by scheme
// support. Returns nullopt when deployable.
std::optional<Incompatibility> check_capabilities(const Graph& base_graph,
                                                  const VariantDescriptor& vd,
                                                  const BackendProfile& backend);

struct WorkItem {
  OpClass cls = OpClass::kMac;
  DType dtype = DType::kF32;
  double elements = 0;
  bool weight_bound = false;  // touched parameters; RAM placement speeds it up
};

// Cost-model decomposition of one node.
std::vector<WorkItem> node_work(const Graph& g, const OpNode& node);

// Cycles for one inference of the (already converted) graph. Work items are
// priced by (class, dtype, acceleration); each node additionally pays the
// device's per-op dispatch overhead, scaled by the class soft-float penalty
// when the node computes in f32 on an FPU-less device. The sum is divided by
// the opt level's speed multiplier.
double cycles_per_inference(const Graph& g, const BackendProfile& backend,
                            const DeviceProfile& device);

// Model flash: serialized parameters at their storage width, plus per
// distinct (op kind, dtype) kernel code, plus scheme support code.
std::size_t flash_model_bytes(const Graph& g, const VariantDescriptor& vd,
                              const BackendProfile& backend);

struct Footprint {
  std::size_t flash_model = 0;
  std::size_t flash_total = 0;
  std::size_t ram_model = 0;
  std::size_t ram_total = 0;
  std::size_t io_bytes = 0;     // host-exchanged buffers outside the arena
  std::size_t weight_bytes = 0;
  std::size_t arena_bytes = 0;
  std::size_t arena_used = 0;   // plan peak + interpreter overhead
  bool flash_ok = true;
  bool ram_ok = true;
  bool arena_ok = true;
};

Footprint compute_footprint(const Graph& g, const VariantDescriptor& vd,
                            const BackendProfile& backend,
                            const DeviceProfile& device,
                            std::size_t arena_bytes, std::size_t plan_peak);

// Arena-search trial on a precomputed plan peak: allocation failure is too
// low, a RAM overflow is too high.
TrialOutcome arena_trial(const Graph& g, const VariantDescriptor& vd,
                         const BackendProfile& backend,
                         const DeviceProfile& device, std::size_t plan_peak,
                         std::size_t arena_bytes);

enum class DeployStatus {
  kOk,
  kRuntimeAllocFail,       // tensor arena too small
  kDeviceMemoryOverflow,   // flash or RAM capacity exceeded
  kUnsupportedModel,       // backend capability mismatch
};
const char* deploy_status_name(DeployStatus s);

inline constexpr int kTimingRuns = 10;

struct DeploymentResult {
  DeployStatus status = DeployStatus::kOk;
  std::string reason;
  Footprint footprint;
  double cycles = 0.0;                  // one inference
  std::vector<double> cycles_per_run;   // kTimingRuns repetitions
  std::vector<TensorValue> outputs;

  bool ok() const { return status == DeployStatus::kOk; }
};

// Simulated deployment: capability check, footprint admission against the
// device, then execution of the inputs under the cycle model. Failures are
// reported in the result, not thrown.
DeploymentResult deploy_model(const Graph& g, const VariantDescriptor& vd,
                              const BackendProfile& backend,
                              const DeviceProfile& device,
                              std::size_t arena_bytes, const SampleSet& inputs);

}  // namespace edgemark

#endif  // EDGEMARK_DEVICE_SIM_HPP_
