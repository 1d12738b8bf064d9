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
#include <yaml-cpp/yaml.h>

#include <set>

#include "edgemark/device_sim.hpp"
#include "edgemark/error.hpp"

namespace edgemark {
namespace {

constexpr double kMinSoftPenalty = 1.85;
constexpr double kMaxSoftPenalty = 9.5;

ClassCost cc(double f32_fpu, double f32_soft, double i8_simd, double i8p,
             double i16_simd, double i16p) {
  return {f32_fpu, f32_soft, i8_simd, i8p, i16_simd, i16p};
}

CycleTable cm4f_cycles() {
  CycleTable t;
  t.of(OpClass::kMac) = cc(1.0, 8.0, 0.4, 1.2, 0.8, 1.6);
  t.of(OpClass::kPool) = cc(0.5, 1.5, 0.2, 0.4, 0.3, 0.6);
  t.of(OpClass::kAct) = cc(0.5, 1.5, 0.3, 0.6, 0.4, 0.8);
  t.of(OpClass::kActExp) = cc(8.0, 60.0, 4.0, 6.0, 5.0, 8.0);
  t.of(OpClass::kEltwise) = cc(0.5, 1.75, 0.25, 0.5, 0.35, 0.7);
  t.of(OpClass::kCopy) = cc(0.25, 0.5, 0.15, 0.25, 0.2, 0.35);
  t.of(OpClass::kRequant) = cc(2.0, 9.0, 1.2, 3.0, 1.5, 3.0);
  return t;
}

CycleTable rxv2_cycles() {
  CycleTable t;
  t.of(OpClass::kMac) = cc(1.1, 7.7, 0.5, 1.3, 0.9, 1.7);
  t.of(OpClass::kPool) = cc(0.55, 1.65, 0.22, 0.44, 0.33, 0.66);
  t.of(OpClass::kAct) = cc(0.55, 1.65, 0.33, 0.66, 0.44, 0.88);
  t.of(OpClass::kActExp) = cc(9.0, 63.0, 4.5, 6.6, 5.5, 8.8);
  t.of(OpClass::kEltwise) = cc(0.55, 1.925, 0.275, 0.55, 0.385, 0.77);
  t.of(OpClass::kCopy) = cc(0.275, 0.55, 0.165, 0.275, 0.22, 0.385);
  t.of(OpClass::kRequant) = cc(2.2, 9.9, 1.32, 3.3, 1.65, 3.3);
  return t;
}

std::map<Scheme, std::size_t> interpreter_scheme_code() {
  return {{Scheme::kBasic, 0},         {Scheme::kDynamic, 1024},
          {Scheme::kInt8, 1536},       {Scheme::kInt8Only, 1280},
          {Scheme::kA16W8, 1792},      {Scheme::kA16W8IntOnly, 1536},
          {Scheme::kFloat16, 768}};
}

std::map<Scheme, std::size_t> direct_scheme_code() {
  return {{Scheme::kBasic, 0},        {Scheme::kDynamic, 512},
          {Scheme::kInt8, 768},       {Scheme::kInt8Only, 640},
          {Scheme::kA16W8, 896},      {Scheme::kA16W8IntOnly, 768},
          {Scheme::kFloat16, 384}};
}

void validate_profiles(const ProfileSet& set, const std::string& where) {
  if (set.devices.empty() || set.backends.empty()) {
    throw Error(ErrKind::kValidation,
                where + ": need at least one device and one backend");
  }
  std::set<std::string> names;
  for (const auto& d : set.devices) {
    if (!names.insert("d:" + d.name).second) {
      throw Error(ErrKind::kValidation,
                  where + ": duplicate device '" + d.name + "'");
    }
    if (d.clock_hz <= 0 || d.flash_capacity == 0 || d.ram_capacity == 0) {
      throw Error(ErrKind::kValidation,
                  where + ": device '" + d.name +
                      "' needs a positive clock and capacities");
    }
    if (d.ram_param_cycle_factor <= 0 || d.ram_param_cycle_factor > 1.0) {
      throw Error(ErrKind::kValidation,
                  where + ": device '" + d.name +
                      "' ram_param_cycle_factor must lie in (0, 1]");
    }
    for (int c = 0; c < kOpClassCount; ++c) {
      const double p = d.cycles.soft_penalty(static_cast<OpClass>(c));
      if (p < kMinSoftPenalty || p > kMaxSoftPenalty) {
        throw Error(ErrKind::kValidation,
                    where + ": device '" + d.name + "' class '" +
                        op_class_name(static_cast<OpClass>(c)) +
                        "' soft-float penalty is outside [1.85, 9.5]");
      }
    }
  }
  std::size_t min_interp_flash = SIZE_MAX, max_direct_flash = 0;
  std::size_t min_interp_ram = SIZE_MAX, max_direct_ram = 0;
  for (const auto& b : set.backends) {
    if (!names.insert("b:" + b.name).second) {
      throw Error(ErrKind::kValidation,
                  where + ": duplicate backend '" + b.name + "'");
    }
    if (b.supported_schemes.empty()) {
      throw Error(ErrKind::kValidation,
                  where + ": backend '" + b.name + "' supports no schemes");
    }
    if (b.style == BackendStyle::kInterpreter) {
      min_interp_flash = std::min(min_interp_flash, b.base_flash);
      min_interp_ram = std::min(min_interp_ram, b.base_ram);
    } else {
      max_direct_flash = std::max(max_direct_flash, b.base_flash);
      max_direct_ram = std::max(max_direct_ram, b.base_ram);
      if (b.arena_overhead != 0) {
        throw Error(ErrKind::kValidation,
                    where + ": direct backend '" + b.name +
                        "' cannot carry interpreter arena overhead");
      }
    }
  }
  if (min_interp_flash != SIZE_MAX && max_direct_flash > 0 &&
      (min_interp_flash <= max_direct_flash ||
       min_interp_ram <= max_direct_ram)) {
    throw Error(ErrKind::kValidation,
                where + ": interpreter backends must have a strictly larger "
                        "base footprint than direct backends");
  }
}

}  // namespace

ProfileSet default_profiles() {
  ProfileSet set;

  DeviceProfile cm4f;
  cm4f.name = "cm4f-sim";
  cm4f.clock_hz = 120e6;
  cm4f.fpu = true;
  cm4f.int8_simd = true;
  cm4f.flash_capacity = 2 * 1024 * 1024;
  cm4f.ram_capacity = 640 * 1024;
  cm4f.per_op_overhead_cycles = 40.0;
  cm4f.ram_param_cycle_factor = 0.85;
  cm4f.opt = *opt_level_by_name("O3");
  cm4f.cycles = cm4f_cycles();
  set.devices.push_back(cm4f);

  DeviceProfile rxv2;
  rxv2.name = "rxv2-sim";
  rxv2.clock_hz = 120e6;
  rxv2.fpu = true;
  // The core has packed integer instructions, but only the vendor backend
  // ships kernels that use them.
  rxv2.int8_simd = true;
  rxv2.flash_capacity = 2 * 1024 * 1024;
  rxv2.ram_capacity = 640 * 1024;
  rxv2.per_op_overhead_cycles = 48.0;
  rxv2.ram_param_cycle_factor = 0.85;
  rxv2.opt = *opt_level_by_name("O3");
  rxv2.cycles = rxv2_cycles();
  set.devices.push_back(rxv2);

  BackendProfile interp;
  interp.name = "interpreter-rt";
  interp.style = BackendStyle::kInterpreter;
  interp.base_flash = 52200;
  interp.base_ram = 3000;
  interp.arena_overhead = 2048;
  interp.per_op_code_bytes = 400;
  interp.scheme_code_bytes = interpreter_scheme_code();
  interp.supported_schemes = {Scheme::kBasic,  Scheme::kDynamic,
                              Scheme::kInt8,   Scheme::kInt8Only,
                              Scheme::kA16W8,  Scheme::kA16W8IntOnly};
  interp.supports_rnn = true;
  interp.accel_int8_on = {"cm4f-sim"};
  set.backends.push_back(interp);

  BackendProfile compiled;
  compiled.name = "compiled-rt";
  compiled.style = BackendStyle::kDirect;
  compiled.base_flash = 26000;
  compiled.base_ram = 1800;
  compiled.arena_overhead = 0;
  compiled.per_op_code_bytes = 220;
  compiled.scheme_code_bytes = direct_scheme_code();
  compiled.supported_schemes = {Scheme::kBasic, Scheme::kInt8Only};
  compiled.supports_rnn = false;
  compiled.supported_ops = {"dense",     "conv2d",     "max_pool2d",
                            "global_avg_pool2d", "activation", "batch_norm",
                            "softmax"};
  compiled.accel_int8_on = {"cm4f-sim"};
  set.backends.push_back(compiled);

  BackendProfile crystal;
  crystal.name = "crystal-rt";
  crystal.style = BackendStyle::kDirect;
  crystal.base_flash = 18800;
  crystal.base_ram = 1200;
  crystal.arena_overhead = 0;
  crystal.per_op_code_bytes = 220;
  crystal.scheme_code_bytes = direct_scheme_code();
  crystal.supported_schemes = {Scheme::kBasic};
  crystal.supports_rnn = false;
  crystal.regression_only = true;
  crystal.supported_ops = {"dense", "activation"};
  crystal.supported_activations = {"sigmoid", "tanh", "leaky_relu"};
  set.backends.push_back(crystal);

  BackendProfile vendor;
  vendor.name = "vendor-rt";
  vendor.style = BackendStyle::kDirect;
  vendor.base_flash = 21000;
  vendor.base_ram = 1500;
  vendor.arena_overhead = 0;
  vendor.per_op_code_bytes = 220;
  vendor.scheme_code_bytes = direct_scheme_code();
  vendor.supported_schemes = {Scheme::kBasic, Scheme::kInt8Only};
  vendor.supports_rnn = false;
  vendor.accel_int8_on = {"rxv2-sim"};
  set.backends.push_back(vendor);

  validate_profiles(set, "default profiles");
  return set;
}

namespace {

void check_keys(const YAML::Node& map, const std::set<std::string>& known,
                const std::string& where) {
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!known.count(key)) {
      throw Error(ErrKind::kValidation,
                  where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T field(const YAML::Node& n, const std::string& key, T fallback) {
  if (!n[key]) return fallback;
  return n[key].as<T>();
}

ClassCost parse_class_cost(const YAML::Node& n, const std::string& where) {
  check_keys(n, {"f32_fpu", "f32_soft", "i8_simd", "i8", "i16_simd", "i16"},
             where);
  ClassCost k;
  k.f32_fpu = field<double>(n, "f32_fpu", k.f32_fpu);
  k.f32_soft = field<double>(n, "f32_soft", k.f32_soft);
  k.i8_simd = field<double>(n, "i8_simd", k.i8_simd);
  k.i8_plain = field<double>(n, "i8", k.i8_plain);
  k.i16_simd = field<double>(n, "i16_simd", k.i16_simd);
  k.i16_plain = field<double>(n, "i16", k.i16_plain);
  return k;
}

DeviceProfile parse_device(const YAML::Node& n) {
  check_keys(n,
             {"name", "clock_hz", "fpu", "int8_simd", "flash_capacity",
              "ram_capacity", "per_op_overhead_cycles",
              "ram_param_cycle_factor", "opt_level", "cycle_table"},
             "device");
  DeviceProfile d;
  if (!n["name"]) throw Error(ErrKind::kValidation, "device without a name");
  d.name = n["name"].as<std::string>();
  d.clock_hz = field<double>(n, "clock_hz", d.clock_hz);
  d.fpu = field<bool>(n, "fpu", d.fpu);
  d.int8_simd = field<bool>(n, "int8_simd", d.int8_simd);
  d.flash_capacity = field<std::size_t>(n, "flash_capacity", d.flash_capacity);
  d.ram_capacity = field<std::size_t>(n, "ram_capacity", d.ram_capacity);
  d.per_op_overhead_cycles =
      field<double>(n, "per_op_overhead_cycles", d.per_op_overhead_cycles);
  d.ram_param_cycle_factor =
      field<double>(n, "ram_param_cycle_factor", d.ram_param_cycle_factor);
  const std::string opt = field<std::string>(n, "opt_level", "O3");
  auto level = opt_level_by_name(opt);
  if (!level) {
    throw Error(ErrKind::kValidation,
                "device '" + d.name + "': unknown opt_level '" + opt + "'");
  }
  d.opt = *level;
  if (n["cycle_table"]) {
    const YAML::Node& ct = n["cycle_table"];
    check_keys(ct, {"mac", "pool", "act", "act_exp", "eltwise", "copy",
                    "requant"},
               "device '" + d.name + "' cycle_table");
    for (int c = 0; c < kOpClassCount; ++c) {
      const char* cls = op_class_name(static_cast<OpClass>(c));
      if (ct[cls]) {
        d.cycles.of(static_cast<OpClass>(c)) = parse_class_cost(
            ct[cls], "device '" + d.name + "' cycle_table." + cls);
      }
    }
  }
  return d;
}

BackendProfile parse_backend(const YAML::Node& n) {
  check_keys(n,
             {"name", "style", "base_flash", "base_ram", "arena_overhead",
              "per_op_code_bytes", "schemes", "scheme_code_bytes",
              "supports_rnn", "regression_only", "ops", "activations",
              "param_placement", "accel_int8_on"},
             "backend");
  BackendProfile b;
  if (!n["name"]) throw Error(ErrKind::kValidation, "backend without a name");
  b.name = n["name"].as<std::string>();
  const std::string style = field<std::string>(n, "style", "interpreter");
  if (style == "interpreter") {
    b.style = BackendStyle::kInterpreter;
  } else if (style == "direct") {
    b.style = BackendStyle::kDirect;
  } else {
    throw Error(ErrKind::kValidation,
                "backend '" + b.name + "': unknown style '" + style + "'");
  }
  b.scheme_code_bytes = b.style == BackendStyle::kInterpreter
                            ? interpreter_scheme_code()
                            : direct_scheme_code();
  b.base_flash = field<std::size_t>(n, "base_flash", b.base_flash);
  b.base_ram = field<std::size_t>(n, "base_ram", b.base_ram);
  b.arena_overhead = field<std::size_t>(n, "arena_overhead", b.arena_overhead);
  b.per_op_code_bytes =
      field<std::size_t>(n, "per_op_code_bytes", b.per_op_code_bytes);
  if (!n["schemes"] || !n["schemes"].IsSequence()) {
    throw Error(ErrKind::kValidation,
                "backend '" + b.name + "': schemes list is required");
  }
  for (const auto& s : n["schemes"]) {
    auto scheme = parse_scheme(s.as<std::string>());
    if (!scheme) {
      throw Error(ErrKind::kValidation,
                  "backend '" + b.name + "': unknown scheme '" +
                      s.as<std::string>() + "'");
    }
    b.supported_schemes.insert(*scheme);
  }
  if (n["scheme_code_bytes"]) {
    for (const auto& kv : n["scheme_code_bytes"]) {
      auto scheme = parse_scheme(kv.first.as<std::string>());
      if (!scheme) {
        throw Error(ErrKind::kValidation,
                    "backend '" + b.name + "': unknown scheme '" +
                        kv.first.as<std::string>() + "' in scheme_code_bytes");
      }
      b.scheme_code_bytes[*scheme] = kv.second.as<std::size_t>();
    }
  }
  b.supports_rnn = field<bool>(n, "supports_rnn", b.supports_rnn);
  b.regression_only = field<bool>(n, "regression_only", b.regression_only);
  if (n["ops"]) {
    for (const auto& o : n["ops"]) {
      b.supported_ops.insert(o.as<std::string>());
    }
  }
  if (n["activations"]) {
    for (const auto& a : n["activations"]) {
      b.supported_activations.insert(a.as<std::string>());
    }
  }
  const std::string placement = field<std::string>(n, "param_placement", "rom");
  if (placement == "rom") {
    b.param_placement = ParamPlacement::kRom;
  } else if (placement == "ram") {
    b.param_placement = ParamPlacement::kRam;
  } else {
    throw Error(ErrKind::kValidation,
                "backend '" + b.name + "': unknown param_placement '" +
                    placement + "'");
  }
  if (n["accel_int8_on"]) {
    for (const auto& d : n["accel_int8_on"]) {
      b.accel_int8_on.insert(d.as<std::string>());
    }
  }
  return b;
}

}  // namespace

ProfileSet load_profiles(const std::filesystem::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw Error(ErrKind::kIo, "cannot open profiles: " + path.string());
  } catch (const YAML::Exception& e) {
    throw Error(ErrKind::kSyntax, path.string() + ": " + e.what());
  }
  if (!root.IsMap()) {
    throw Error(ErrKind::kSyntax,
                path.string() + ": top level must be a map");
  }
  check_keys(root, {"devices", "backends"}, path.string());
  ProfileSet set;
  try {
    for (const auto& d : root["devices"]) set.devices.push_back(parse_device(d));
    for (const auto& b : root["backends"]) {
      set.backends.push_back(parse_backend(b));
    }
  } catch (const YAML::Exception& e) {
    throw Error(ErrKind::kSyntax, path.string() + ": " + e.what());
  }
  validate_profiles(set, path.string());
  return set;
}

}  // namespace edgemark
