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
#include <doctest.h>

#include <string>

#include "edgemark/config.hpp"
#include "edgemark/dataset.hpp"
#include "edgemark/device_sim.hpp"
#include "edgemark/error.hpp"
#include "edgemark/graph.hpp"
#include "edgemark/mem_plan.hpp"
#include "edgemark/optimize.hpp"
#include "edgemark/pipeline.hpp"
#include "testutil.hpp"

using namespace edgemark;

namespace {

ModelSpec spec_of(const std::string& stem) {
  return parse_model_config(testutil::config_dir() / (stem + ".yaml"));
}

Graph variant_of(const ModelSpec& spec, const std::string& vname) {
  Graph base = build_graph(spec);
  VariantDescriptor vd = *VariantDescriptor::parse(vname);
  SampleSet calib = generate_samples(spec.dataset, kCalibrationSamples,
                                     calibration_seed(spec));
  return apply_variant(base, vd, &calib);
}

std::size_t fitting_arena(const Graph& g, const VariantDescriptor& vd,
                          const BackendProfile& backend) {
  return plan_arena(g, vd).peak + backend.arena_overhead;
}

}  // namespace

TEST_CASE("built-in profiles load from the shipped file unchanged") {
  ProfileSet builtin = default_profiles();
  REQUIRE(builtin.devices.size() == 2);
  REQUIRE(builtin.backends.size() == 4);
  CHECK(builtin.device("cm4f-sim") != nullptr);
  CHECK(builtin.device("rxv2-sim") != nullptr);
  CHECK(builtin.backend("interpreter-rt") != nullptr);
  CHECK(builtin.backend("compiled-rt") != nullptr);
  CHECK(builtin.backend("crystal-rt") != nullptr);
  CHECK(builtin.backend("vendor-rt") != nullptr);
  CHECK(builtin.device("no-such") == nullptr);
  CHECK(builtin.backend("no-such") == nullptr);

  ProfileSet loaded =
      load_profiles(testutil::project_dir() / "profiles" / "default.yaml");
  REQUIRE(loaded.devices.size() == builtin.devices.size());
  REQUIRE(loaded.backends.size() == builtin.backends.size());
  for (std::size_t i = 0; i < loaded.devices.size(); ++i) {
    CAPTURE(builtin.devices[i].name);
    CHECK(loaded.devices[i] == builtin.devices[i]);
  }
  for (std::size_t i = 0; i < loaded.backends.size(); ++i) {
    CAPTURE(builtin.backends[i].name);
    CHECK(loaded.backends[i] == builtin.backends[i]);
  }
}

TEST_CASE("profile validation rejects broken documents") {
  auto dir = testutil::scratch_dir("profiles");
  auto load_text = [&](const std::string& name, const std::string& text) {
    return load_profiles(testutil::write_file(dir / name, text));
  };
  const std::string device_ok =
      "devices:\n"
      "  - name: d\n"
      "    clock_hz: 1000000\n"
      "    flash_capacity: 1000000\n"
      "    ram_capacity: 100000\n";
  const std::string backend_ok =
      "backends:\n"
      "  - name: b\n"
      "    style: direct\n"
      "    base_flash: 1000\n"
      "    base_ram: 100\n"
      "    schemes: [basic]\n";

  CHECK_NOTHROW(load_text("min.yaml", device_ok + backend_ok));

  auto kind_of = [&](const std::string& name, const std::string& text) {
    try {
      load_text(name, text);
    } catch (const Error& e) {
      return e.kind();
    }
    FAIL(("expected an error for " + name));
    return ErrKind::kInternal;
  };

  try {
    load_profiles(dir / "absent.yaml");
    FAIL("expected an error for a missing file");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::kIo);
  }
  CHECK(kind_of("empty.yaml", "") == ErrKind::kSyntax);
  CHECK(kind_of("syntax.yaml", "devices: [unclosed") == ErrKind::kSyntax);
  CHECK(kind_of("unknown_key.yaml",
                device_ok + "    rocket_boost: 11\n" + backend_ok) ==
        ErrKind::kValidation);
  // Soft-float penalty of 1x sits outside the allowed [1.85, 9.5] band.
  CHECK(kind_of("flat_penalty.yaml",
                device_ok +
                    "    cycle_table:\n"
                    "      mac: {f32_fpu: 1.0, f32_soft: 1.0}\n" +
                    backend_ok) == ErrKind::kValidation);
  CHECK(kind_of("huge_penalty.yaml",
                device_ok +
                    "    cycle_table:\n"
                    "      mac: {f32_fpu: 1.0, f32_soft: 20.0}\n" +
                    backend_ok) == ErrKind::kValidation);
  // Direct backends carry no interpreter bookkeeping.
  CHECK(kind_of("direct_overhead.yaml",
                device_ok + backend_ok + "    arena_overhead: 64\n") ==
        ErrKind::kValidation);
  // Interpreter base footprint must strictly exceed every direct backend's.
  CHECK(kind_of("cheap_interp.yaml", device_ok + backend_ok +
                                         "  - name: i\n"
                                         "    style: interpreter\n"
                                         "    base_flash: 900\n"
                                         "    base_ram: 1000\n"
                                         "    arena_overhead: 512\n"
                                         "    schemes: [basic]\n") ==
        ErrKind::kValidation);
  CHECK(kind_of("no_backends.yaml", device_ok) == ErrKind::kValidation);
  CHECK(kind_of("dup_device.yaml",
                device_ok +
                    "  - name: d\n"
                    "    clock_hz: 1000000\n"
                    "    flash_capacity: 1000000\n"
                    "    ram_capacity: 100000\n" +
                    backend_ok) == ErrKind::kValidation);
  CHECK(kind_of("bad_factor.yaml",
                device_ok + "    ram_param_cycle_factor: 0.0\n" + backend_ok) ==
        ErrKind::kValidation);
  CHECK(kind_of("bad_opt.yaml", device_ok + "    opt_level: O9\n" + backend_ok) ==
        ErrKind::kValidation);
}

TEST_CASE("capability checks produce structured skip reasons") {
  ProfileSet profiles = default_profiles();
  const BackendProfile& interp = *profiles.backend("interpreter-rt");
  const BackendProfile& compiled = *profiles.backend("compiled-rt");
  const BackendProfile& crystal = *profiles.backend("crystal-rt");
  const BackendProfile& vendor = *profiles.backend("vendor-rt");

  VariantDescriptor basic;
  VariantDescriptor dynamic{Scheme::kDynamic};
  VariantDescriptor int8_only{Scheme::kInt8Only};

  Graph cnn = build_graph(spec_of("cnn_tiny"));
  CHECK_FALSE(check_capabilities(cnn, int8_only, interp).has_value());
  CHECK_FALSE(check_capabilities(cnn, int8_only, compiled).has_value());

  Graph rnn = build_graph(spec_of("simple1"));
  auto inc = check_capabilities(rnn, basic, compiled);
  REQUIRE(inc.has_value());
  CHECK(inc->kind == "rnn");
  CHECK(inc->to_string().find("compiled-rt") != std::string::npos);

  inc = check_capabilities(cnn, dynamic, vendor);
  REQUIRE(inc.has_value());
  CHECK(inc->kind == "scheme");

  Graph classifier = build_graph(spec_of("fc_class"));
  inc = check_capabilities(classifier, basic, crystal);
  REQUIRE(inc.has_value());
  CHECK(inc->kind == "regression_only");

  // crystal-rt has no relu kernel and no conv support.
  Graph relu_fc = build_graph(spec_of("fc3"));
  inc = check_capabilities(relu_fc, basic, crystal);
  REQUIRE(inc.has_value());
  CHECK(inc->kind == "op");

  Graph sinus = build_graph(spec_of("fc_sinus"));
  CHECK_FALSE(check_capabilities(sinus, basic, crystal).has_value());
}

TEST_CASE("work decomposition covers parameters and output size") {
  Graph g = build_graph(spec_of("fc2"));
  for (const auto& node : g.nodes) {
    if (node.kind != OpKind::kDense) continue;
    auto items = node_work(g, node);
    REQUIRE_FALSE(items.empty());
    CHECK(items.front().cls == OpClass::kMac);
    CHECK(items.front().weight_bound);
    const auto& w = g.tensor(node.params[0]);
    CHECK(items.front().elements == doctest::Approx(double(w.elements())));
  }
}

TEST_CASE("missing fpu slows float models inside the declared band") {
  ProfileSet profiles = default_profiles();
  const BackendProfile& interp = *profiles.backend("interpreter-rt");
  DeviceProfile dev = *profiles.device("cm4f-sim");

  ModelSpec spec = spec_of("cnn_tiny");
  Graph basic = variant_of(spec, "basic");
  Graph int8_only = variant_of(spec, "int8_only");

  dev.fpu = true;
  double with_fpu = cycles_per_inference(basic, interp, dev);
  double int_with = cycles_per_inference(int8_only, interp, dev);
  dev.fpu = false;
  double without_fpu = cycles_per_inference(basic, interp, dev);
  double int_without = cycles_per_inference(int8_only, interp, dev);

  double ratio = without_fpu / with_fpu;
  CHECK(ratio >= 1.85);
  CHECK(ratio <= 9.5);
  // Integer-only graphs never touch the FPU.
  CHECK(int_with == int_without);
  // With SIMD kernels the integer model beats the float one outright.
  CHECK(int_with < with_fpu);
}

TEST_CASE("optimization levels trade speed against flash") {
  ProfileSet profiles = default_profiles();
  const BackendProfile& interp = *profiles.backend("interpreter-rt");
  DeviceProfile dev = *profiles.device("cm4f-sim");
  ModelSpec spec = spec_of("fc3");
  Graph g = variant_of(spec, "basic");
  VariantDescriptor vd;
  std::size_t arena = fitting_arena(g, vd, interp);

  dev.opt = *opt_level_by_name("Os");
  double cy_os = cycles_per_inference(g, interp, dev);
  auto fp_os = compute_footprint(g, vd, interp, dev, arena, arena);
  dev.opt = *opt_level_by_name("O3");
  double cy_o3 = cycles_per_inference(g, interp, dev);
  auto fp_o3 = compute_footprint(g, vd, interp, dev, arena, arena);
  dev.opt = *opt_level_by_name("Ofast");
  double cy_ofast = cycles_per_inference(g, interp, dev);

  CHECK(cy_os > cy_o3);        // Os optimizes for size, not speed
  CHECK(cy_ofast < cy_o3);     // Ofast is the fastest level
  CHECK(fp_os.flash_total < fp_o3.flash_total);
  CHECK(fp_os.flash_model == fp_o3.flash_model);
  CHECK_FALSE(opt_level_by_name("O2").has_value());
}

TEST_CASE("ram parameter placement trades ram for speed") {
  ProfileSet profiles = default_profiles();
  BackendProfile backend = *profiles.backend("vendor-rt");
  const DeviceProfile& dev = *profiles.device("cm4f-sim");
  ModelSpec spec = spec_of("fc3");
  Graph g = variant_of(spec, "basic");
  VariantDescriptor vd;
  std::size_t arena = fitting_arena(g, vd, backend);

  backend.param_placement = ParamPlacement::kRom;
  double rom_cycles = cycles_per_inference(g, backend, dev);
  auto rom_fp = compute_footprint(g, vd, backend, dev, arena, arena);
  backend.param_placement = ParamPlacement::kRam;
  double ram_cycles = cycles_per_inference(g, backend, dev);
  auto ram_fp = compute_footprint(g, vd, backend, dev, arena, arena);

  CHECK(ram_cycles < rom_cycles);  // factor 0.85 on weight-bound work
  CHECK(ram_fp.ram_total == rom_fp.ram_total + ram_fp.weight_bytes);
  CHECK(ram_fp.weight_bytes > 0);
}

TEST_CASE("deployment is deterministic and reports equal timing runs") {
  ProfileSet profiles = default_profiles();
  const BackendProfile& interp = *profiles.backend("interpreter-rt");
  const DeviceProfile& dev = *profiles.device("cm4f-sim");
  ModelSpec spec = spec_of("fc_class");
  Graph g = variant_of(spec, "int8");
  VariantDescriptor vd = *VariantDescriptor::parse("int8");
  SampleSet inputs = generate_samples(spec.dataset, 2, evaluation_seed(spec));
  std::size_t arena = fitting_arena(g, vd, interp);

  DeploymentResult a = deploy_model(g, vd, interp, dev, arena, inputs);
  DeploymentResult b = deploy_model(g, vd, interp, dev, arena, inputs);
  REQUIRE(a.ok());
  CHECK(a.reason.empty());
  REQUIRE(a.cycles_per_run.size() == kTimingRuns);
  for (double c : a.cycles_per_run) CHECK(c == a.cycles);
  CHECK(a.cycles == cycles_per_inference(g, interp, dev));
  REQUIRE(a.outputs.size() == 2);
  CHECK(b.cycles == a.cycles);
  for (std::size_t i = 0; i < a.outputs.size(); ++i) {
    CHECK(a.outputs[i].as_f32() == b.outputs[i].as_f32());
  }
  CHECK(a.footprint.flash_ok);
  CHECK(a.footprint.ram_ok);
  CHECK(a.footprint.arena_ok);
  CHECK(a.footprint.arena_used <= arena);
}

TEST_CASE("deployment failures become statuses, not exceptions") {
  ProfileSet profiles = default_profiles();
  const BackendProfile& interp = *profiles.backend("interpreter-rt");
  const BackendProfile& compiled = *profiles.backend("compiled-rt");
  DeviceProfile dev = *profiles.device("cm4f-sim");
  ModelSpec spec = spec_of("fc0");
  Graph g = variant_of(spec, "basic");
  VariantDescriptor vd;
  SampleSet inputs = generate_samples(spec.dataset, 1, evaluation_seed(spec));
  std::size_t arena = fitting_arena(g, vd, interp);

  DeploymentResult small =
      deploy_model(g, vd, interp, dev, arena - 16, inputs);
  CHECK(small.status == DeployStatus::kRuntimeAllocFail);
  CHECK_FALSE(small.reason.empty());
  CHECK(std::string(deploy_status_name(small.status)) ==
        "runtime_alloc_fail");

  dev.ram_capacity = 1024;
  DeploymentResult overflow = deploy_model(g, vd, interp, dev, arena, inputs);
  CHECK(overflow.status == DeployStatus::kDeviceMemoryOverflow);
  CHECK_FALSE(overflow.footprint.ram_ok);

  dev.ram_capacity = 640 * 1024;
  Graph rnn = variant_of(spec_of("simple0"), "basic");
  DeploymentResult unsupported =
      deploy_model(rnn, vd, compiled, dev, arena, inputs);
  CHECK(unsupported.status == DeployStatus::kUnsupportedModel);
  CHECK(unsupported.reason.find("rnn") != std::string::npos);
}

TEST_CASE("arena trials map the deploy trichotomy") {
  ProfileSet profiles = default_profiles();
  const BackendProfile& interp = *profiles.backend("interpreter-rt");
  DeviceProfile dev = *profiles.device("cm4f-sim");
  ModelSpec spec = spec_of("fc3");
  VariantDescriptor vd;
  Graph g = variant_of(spec, "basic");
  std::size_t peak = plan_arena(g, vd).peak;
  std::size_t need = peak + interp.arena_overhead;

  CHECK(arena_trial(g, vd, interp, dev, peak, need - 1) ==
        TrialOutcome::kTooLow);
  CHECK(arena_trial(g, vd, interp, dev, peak, need) == TrialOutcome::kCorrect);
  CHECK(arena_trial(g, vd, interp, dev, peak, dev.ram_capacity) ==
        TrialOutcome::kTooHigh);
}

TEST_CASE("profile content hashes react to field changes") {
  ProfileSet profiles = default_profiles();
  DeviceProfile dev = *profiles.device("cm4f-sim");
  std::uint64_t h = dev.content_hash();
  dev.clock_hz *= 2;
  CHECK(dev.content_hash() != h);

  BackendProfile backend = *profiles.backend("vendor-rt");
  std::uint64_t hb = backend.content_hash();
  backend.base_flash += 1;
  CHECK(backend.content_hash() != hb);
}
