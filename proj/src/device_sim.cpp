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
#include "edgemark/device_sim.hpp"

#include <cmath>

#include "edgemark/error.hpp"
#include "edgemark/execute.hpp"
#include "edgemark/hash.hpp"

namespace edgemark {

const char* op_class_name(OpClass c) {
  switch (c) {
    case OpClass::kMac: return "mac";
    case OpClass::kPool: return "pool";
    case OpClass::kAct: return "act";
    case OpClass::kActExp: return "act_exp";
    case OpClass::kEltwise: return "eltwise";
    case OpClass::kCopy: return "copy";
    case OpClass::kRequant: return "requant";
  }
  return "?";
}

double CycleTable::cost(OpClass c, DType dtype, bool fpu, bool int_simd) const {
  const ClassCost& k = of(c);
  switch (dtype) {
    case DType::kF32:
    case DType::kF16:
      return fpu ? k.f32_fpu : k.f32_soft;
    case DType::kI8:
      return int_simd ? k.i8_simd : k.i8_plain;
    case DType::kI16:
    case DType::kI32:
      return int_simd ? k.i16_simd : k.i16_plain;
  }
  return k.f32_fpu;
}

double CycleTable::soft_penalty(OpClass c) const {
  return of(c).f32_soft / of(c).f32_fpu;
}

std::optional<OptLevelSpec> opt_level_by_name(const std::string& name) {
  if (name == "Os") return OptLevelSpec{"Os", 0.8, 0.92};
  if (name == "O3") return OptLevelSpec{"O3", 1.0, 1.0};
  if (name == "Ofast") return OptLevelSpec{"Ofast", 1.01, 1.0};
  return std::nullopt;
}

namespace {

void hash_cycle_table(Fnv1a64& h, const CycleTable& t) {
  for (int i = 0; i < kOpClassCount; ++i) {
    const ClassCost& k = t.classes[i];
    h.update_value(k.f32_fpu).update_value(k.f32_soft);
    h.update_value(k.i8_simd).update_value(k.i8_plain);
    h.update_value(k.i16_simd).update_value(k.i16_plain);
  }
}

}  // namespace

std::uint64_t DeviceProfile::content_hash() const {
  Fnv1a64 h;
  h.update(name).update_value(clock_hz).update_value(fpu);
  h.update_value(int8_simd).update_value(flash_capacity);
  h.update_value(ram_capacity).update_value(per_op_overhead_cycles);
  h.update_value(ram_param_cycle_factor);
  h.update(opt.name).update_value(opt.speed_multiplier);
  h.update_value(opt.flash_multiplier);
  hash_cycle_table(h, cycles);
  return h.digest();
}

std::uint64_t BackendProfile::content_hash() const {
  Fnv1a64 h;
  h.update(name).update_value(static_cast<int>(style));
  h.update_value(base_flash).update_value(base_ram);
  h.update_value(arena_overhead).update_value(per_op_code_bytes);
  for (const auto& [s, b] : scheme_code_bytes) {
    h.update(scheme_name(s)).update_value(b);
  }
  for (Scheme s : supported_schemes) h.update(scheme_name(s));
  h.update_value(supports_rnn).update_value(regression_only);
  for (const auto& op : supported_ops) h.update(op);
  for (const auto& a : supported_activations) h.update(a);
  h.update_value(static_cast<int>(param_placement));
  for (const auto& d : accel_int8_on) h.update(d);
  return h.digest();
}

const DeviceProfile* ProfileSet::device(const std::string& name) const {
  for (const auto& d : devices) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const BackendProfile* ProfileSet::backend(const std::string& name) const {
  for (const auto& b : backends) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

std::string Incompatibility::to_string() const {
  return "unsupported " + kind + ": " + detail;
}

std::optional<Incompatibility> check_capabilities(
    const Graph& base_graph, const VariantDescriptor& vd,
    const BackendProfile& backend) {
  if (!backend.supported_schemes.count(vd.scheme)) {
    return Incompatibility{"scheme", std::string(scheme_name(vd.scheme)) +
                                         " is not offered by " + backend.name};
  }
  if (base_graph.has_rnn() && !backend.supports_rnn) {
    return Incompatibility{
        "rnn", backend.name + " has no recurrent layer support"};
  }
  if (backend.regression_only && base_graph.classification) {
    return Incompatibility{
        "regression_only",
        backend.name + " only deploys regression heads"};
  }
  for (const auto& node : base_graph.nodes) {
    if (node.kind == OpKind::kActivation &&
        !backend.supported_activations.empty() &&
        !backend.supported_activations.count(activation_name(node.act))) {
      return Incompatibility{"op", std::string("activation ") +
                                       activation_name(node.act) +
                                       " is not available on " + backend.name};
    }
    if (!backend.supported_ops.empty() &&
        !backend.supported_ops.count(op_kind_name(node.kind))) {
      return Incompatibility{"op", std::string(op_kind_name(node.kind)) +
                                       " is not available on " + backend.name};
    }
  }
  return std::nullopt;
}

std::vector<WorkItem> node_work(const Graph& g, const OpNode& node) {
  const TensorInfo& out = g.tensor(node.output);
  const TensorInfo& in = g.tensor(node.input);
  const DType dt = out.dtype;
  const bool integer = !dtype_is_float(dt);
  const double out_n = static_cast<double>(out.elements());
  std::vector<WorkItem> items;

  // Weights a float op must widen on every use (dynamic i8 or f16 storage).
  auto widened_weights = [&](int pid) {
    const DType wdt = g.tensor(pid).dtype;
    return wdt == DType::kI8 || wdt == DType::kF16;
  };

  auto macs = [&]() {
    double m = 0;
    switch (node.kind) {
      case OpKind::kDense: {
        const double in_dim =
            node.per_step ? in.shape.back() : shape_elements(in.shape);
        m = out_n * in_dim;
        break;
      }
      case OpKind::kConv2d: {
        const auto& w = g.tensor(node.params[0]).shape;
        m = out_n * w[1] * w[2] * w[3];
        break;
      }
      case OpKind::kSimpleRnn:
      case OpKind::kLstm:
      case OpKind::kGru: {
        const double gates =
            node.kind == OpKind::kLstm ? 4 : (node.kind == OpKind::kGru ? 3 : 1);
        m = static_cast<double>(in.shape[0]) * gates * out.shape[1] *
            (in.shape[1] + out.shape[1]);
        break;
      }
      default:
        break;
    }
    return m;
  };

  switch (node.kind) {
    case OpKind::kDense:
    case OpKind::kConv2d: {
      items.push_back({OpClass::kMac, dt, macs(), true});
      if (integer) {
        items.push_back({OpClass::kRequant, dt, out_n, false});
      } else if (widened_weights(node.params[0])) {
        items.push_back({OpClass::kCopy, DType::kF32, macs(), true});
      }
      break;
    }
    case OpKind::kMaxPool2d:
      items.push_back(
          {OpClass::kPool, dt,
           out_n * static_cast<double>(node.kernel) * node.kernel, false});
      break;
    case OpKind::kGlobalAvgPool2d:
      items.push_back(
          {OpClass::kPool, dt, static_cast<double>(in.elements()), false});
      break;
    case OpKind::kActivation:
      items.push_back({node.act == Activation::kTanh ||
                               node.act == Activation::kSigmoid
                           ? OpClass::kActExp
                           : OpClass::kAct,
                       dt, out_n, false});
      break;
    case OpKind::kBatchNorm:
      items.push_back({OpClass::kEltwise, dt, 2.0 * out_n, true});
      if (integer) items.push_back({OpClass::kRequant, dt, out_n, false});
      break;
    case OpKind::kSoftmax:
      items.push_back({OpClass::kActExp, dt, 2.0 * out_n, false});
      break;
    case OpKind::kSimpleRnn:
    case OpKind::kLstm:
    case OpKind::kGru: {
      items.push_back({OpClass::kMac, dt, macs(), true});
      const double steps = in.shape[0];
      const double units = out.shape[1];
      const double gates =
          node.kind == OpKind::kLstm ? 4 : (node.kind == OpKind::kGru ? 3 : 1);
      items.push_back({OpClass::kActExp, dt, steps * gates * units, false});
      if (node.kind == OpKind::kLstm) {
        items.push_back({OpClass::kEltwise, dt, steps * 3.0 * units, false});
      } else if (node.kind == OpKind::kGru) {
        items.push_back({OpClass::kEltwise, dt, steps * 4.0 * units, false});
      }
      if (integer) {
        items.push_back({OpClass::kRequant, dt, steps * units, false});
      } else if (widened_weights(node.params[0])) {
        items.push_back({OpClass::kCopy, DType::kF32, macs(), true});
      }
      break;
    }
    case OpKind::kEmbedding:
      items.push_back({OpClass::kCopy, dt, out_n, true});
      break;
    case OpKind::kQuantize:
    case OpKind::kDequantize:
      items.push_back({OpClass::kRequant, DType::kF32, out_n, false});
      break;
    case OpKind::kRequantize:
      items.push_back({OpClass::kRequant, dt, out_n, false});
      break;
  }
  return items;
}

double cycles_per_inference(const Graph& g, const BackendProfile& backend,
                            const DeviceProfile& device) {
  const bool simd = device.int8_simd && backend.accel_int8_on.count(device.name);
  const bool ram_params = backend.param_placement == ParamPlacement::kRam;
  double total = 0.0;
  for (const auto& node : g.nodes) {
    const auto items = node_work(g, node);
    double node_cycles = 0.0;
    for (const auto& it : items) {
      double c = it.elements *
                 device.cycles.cost(it.cls, it.dtype, device.fpu, simd);
      if (ram_params && it.weight_bound) c *= device.ram_param_cycle_factor;
      node_cycles += c;
    }
    // Dispatch overhead inherits the soft-float penalty of the node's
    // leading work class when the node computes in f32 without an FPU, so
    // integer-only graphs cost the same with or without the FPU.
    double overhead = device.per_op_overhead_cycles;
    if (!items.empty() && dtype_is_float(items.front().dtype) && !device.fpu) {
      overhead *= device.cycles.soft_penalty(items.front().cls);
    }
    total += node_cycles + overhead;
  }
  return total / device.opt.speed_multiplier;
}

namespace {

const char* dtype_group(DType dt) {
  switch (dt) {
    case DType::kF32:
    case DType::kF16:
      return "f32";
    case DType::kI8:
      return "i8";
    case DType::kI16:
    case DType::kI32:
      return "i16";
  }
  return "f32";
}

}  // namespace

std::size_t flash_model_bytes(const Graph& g, const VariantDescriptor& vd,
                              const BackendProfile& backend) {
  std::size_t weights = 0;
  for (const auto& t : g.tensors) {
    if (t.is_param()) weights += t.bytes();
  }
  std::set<std::string> op_kernels;
  for (const auto& node : g.nodes) {
    op_kernels.insert(std::string(op_kind_name(node.kind)) + "/" +
                      dtype_group(g.tensor(node.output).dtype));
  }
  std::size_t scheme_code = 0;
  auto it = backend.scheme_code_bytes.find(vd.scheme);
  if (it != backend.scheme_code_bytes.end()) scheme_code = it->second;
  return weights + op_kernels.size() * backend.per_op_code_bytes + scheme_code;
}

Footprint compute_footprint(const Graph& g, const VariantDescriptor& vd,
                            const BackendProfile& backend,
                            const DeviceProfile& device,
                            std::size_t arena_bytes, std::size_t plan_peak) {
  Footprint fp;
  fp.arena_bytes = arena_bytes;
  fp.flash_model = flash_model_bytes(g, vd, backend);
  fp.flash_total =
      static_cast<std::size_t>(std::llround(
          static_cast<double>(backend.base_flash) * device.opt.flash_multiplier)) +
      fp.flash_model;
  for (const auto& t : g.tensors) {
    if (t.is_param()) fp.weight_bytes += t.bytes();
  }
  if (!io_in_arena(vd)) {
    fp.io_bytes = g.input().bytes() + g.output().bytes();
  }
  fp.ram_model = arena_bytes + fp.io_bytes;
  if (backend.param_placement == ParamPlacement::kRam) {
    fp.ram_model += fp.weight_bytes;
  }
  fp.ram_total = backend.base_ram + fp.ram_model;
  fp.arena_used = plan_peak + backend.arena_overhead;
  fp.flash_ok = fp.flash_total <= device.flash_capacity;
  fp.ram_ok = fp.ram_total <= device.ram_capacity;
  fp.arena_ok = fp.arena_used <= arena_bytes;
  return fp;
}

TrialOutcome arena_trial(const Graph& g, const VariantDescriptor& vd,
                         const BackendProfile& backend,
                         const DeviceProfile& device, std::size_t plan_peak,
                         std::size_t arena_bytes) {
  Footprint fp =
      compute_footprint(g, vd, backend, device, arena_bytes, plan_peak);
  if (!fp.arena_ok) return TrialOutcome::kTooLow;
  if (!fp.ram_ok) return TrialOutcome::kTooHigh;
  return TrialOutcome::kCorrect;
}

const char* deploy_status_name(DeployStatus s) {
  switch (s) {
    case DeployStatus::kOk: return "ok";
    case DeployStatus::kRuntimeAllocFail: return "runtime_alloc_fail";
    case DeployStatus::kDeviceMemoryOverflow: return "device_memory_overflow";
    case DeployStatus::kUnsupportedModel: return "unsupported_model";
  }
  return "?";
}

DeploymentResult deploy_model(const Graph& g, const VariantDescriptor& vd,
                              const BackendProfile& backend,
                              const DeviceProfile& device,
                              std::size_t arena_bytes,
                              const SampleSet& inputs) {
  DeploymentResult res;
  if (auto inc = check_capabilities(g, vd, backend)) {
    res.status = DeployStatus::kUnsupportedModel;
    res.reason = inc->to_string();
    return res;
  }
  AllocationPlan plan = plan_arena(g, vd);
  res.footprint =
      compute_footprint(g, vd, backend, device, arena_bytes, plan.peak);
  if (!res.footprint.flash_ok) {
    res.status = DeployStatus::kDeviceMemoryOverflow;
    res.reason = "model flash " + std::to_string(res.footprint.flash_total) +
                 " B exceeds capacity " +
                 std::to_string(device.flash_capacity) + " B";
    return res;
  }
  if (!res.footprint.ram_ok) {
    res.status = DeployStatus::kDeviceMemoryOverflow;
    res.reason = "model ram " + std::to_string(res.footprint.ram_total) +
                 " B exceeds capacity " + std::to_string(device.ram_capacity) +
                 " B";
    return res;
  }
  if (!res.footprint.arena_ok) {
    res.status = DeployStatus::kRuntimeAllocFail;
    res.reason = "arena needs " + std::to_string(res.footprint.arena_used) +
                 " B but only " + std::to_string(arena_bytes) +
                 " B were reserved";
    return res;
  }
  res.cycles = cycles_per_inference(g, backend, device);
  res.cycles_per_run.assign(kTimingRuns, res.cycles);
  res.outputs.reserve(inputs.size());
  for (const auto& input : inputs.inputs) {
    res.outputs.push_back(execute_graph(g, input));
  }
  return res;
}

}  // namespace edgemark
