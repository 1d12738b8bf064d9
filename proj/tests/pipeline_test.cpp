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

#include <set>
#include <sstream>
#include <tuple>

#include "edgemark/config.hpp"
#include "edgemark/error.hpp"
#include "edgemark/mem_plan.hpp"
#include "edgemark/pipeline.hpp"
#include "testutil.hpp"

using namespace edgemark;

namespace {

PipelineOptions base_options(const std::string& scratch) {
  PipelineOptions opts;
  opts.config_dir = testutil::config_dir();
  opts.out_dir = testutil::scratch_dir(scratch);
  opts.quiet = true;
  return opts;
}

}  // namespace

TEST_CASE("calibration and evaluation streams are distinct") {
  ModelSpec spec =
      parse_model_config(testutil::config_dir() / "fc1.yaml");
  CHECK(calibration_seed(spec) != evaluation_seed(spec));
  ModelSpec other = spec;
  other.random_seed += 1;
  CHECK(calibration_seed(other) != calibration_seed(spec));
}

TEST_CASE("job planning expands the full matrix deterministically") {
  auto specs = scan_config_dir(testutil::config_dir());
  ProfileSet profiles = default_profiles();
  PipelineOptions opts;
  auto jobs = plan_jobs(specs, profiles, opts);
  CHECK(jobs.size() == specs.size() * 11 * 4 * 2);

  auto again = plan_jobs(specs, profiles, opts);
  REQUIRE(again.size() == jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    CHECK(jobs[i].model == again[i].model);
    CHECK(jobs[i].variant == again[i].variant);
    CHECK(jobs[i].backend == again[i].backend);
    CHECK(jobs[i].device == again[i].device);
    CHECK(jobs[i].key == again[i].key);
  }

  // Model-major order, and keys unique across the matrix.
  std::set<std::uint64_t> keys;
  int last_model = 0;
  for (const auto& j : jobs) {
    CHECK(j.model >= last_model);
    last_model = j.model;
    keys.insert(j.key);
  }
  CHECK(keys.size() == jobs.size());
}

TEST_CASE("planning records capability skips up front") {
  auto specs = scan_config_dir(testutil::config_dir());
  ProfileSet profiles = default_profiles();
  PipelineOptions opts;
  auto jobs = plan_jobs(specs, profiles, opts);

  auto backend_name = [&](const BenchmarkJob& j) {
    return profiles.backends[j.backend].name;
  };
  std::size_t rnn_skips = 0, scheme_skips = 0, regression_skips = 0;
  for (const auto& j : jobs) {
    const ModelSpec& spec = specs[j.model];
    if (spec.model_type == ModelType::kRNN && backend_name(j) != "interpreter-rt") {
      REQUIRE(j.skip.has_value());
      // The scheme gate fires first for schemes the backend lacks entirely.
      CHECK((j.skip->kind == "rnn" || j.skip->kind == "scheme"));
      rnn_skips += j.skip->kind == "rnn";
    }
    if (j.variant.scheme == Scheme::kDynamic && backend_name(j) == "vendor-rt") {
      REQUIRE(j.skip.has_value());
      CHECK(j.skip->kind == "scheme");
      ++scheme_skips;
    }
    if (spec.name == "fc_class" && backend_name(j) == "crystal-rt" &&
        j.variant.scheme == Scheme::kBasic) {
      REQUIRE(j.skip.has_value());
      CHECK(j.skip->kind == "regression_only");
      ++regression_skips;
    }
  }
  CHECK(rnn_skips > 0);
  CHECK(scheme_skips > 0);
  CHECK(regression_skips > 0);
}

TEST_CASE("job keys react to every identity component") {
  auto specs = scan_config_dir(testutil::config_dir());
  ProfileSet profiles = default_profiles();
  VariantDescriptor basic;
  VariantDescriptor int8 = *VariantDescriptor::parse("int8");

  std::uint64_t base = job_key(specs[0], basic, profiles.backends[0],
                               profiles.devices[0]);
  CHECK(job_key(specs[0], basic, profiles.backends[0], profiles.devices[0]) ==
        base);
  CHECK(job_key(specs[1], basic, profiles.backends[0], profiles.devices[0]) !=
        base);
  CHECK(job_key(specs[0], int8, profiles.backends[0], profiles.devices[0]) !=
        base);
  CHECK(job_key(specs[0], basic, profiles.backends[1], profiles.devices[0]) !=
        base);
  CHECK(job_key(specs[0], basic, profiles.backends[0], profiles.devices[1]) !=
        base);

  DeviceProfile tweaked = profiles.devices[0];
  tweaked.clock_hz += 1;
  CHECK(job_key(specs[0], basic, profiles.backends[0], tweaked) != base);
}

TEST_CASE("selector typos are usage errors") {
  auto specs = scan_config_dir(testutil::config_dir());
  ProfileSet profiles = default_profiles();
  PipelineOptions opts;
  opts.models = {"fc0", "nonexistent_model"};
  try {
    plan_jobs(specs, profiles, opts);
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::kUsage);
    CHECK(std::string(e.what()).find("nonexistent_model") !=
          std::string::npos);
  }
  opts.models.clear();
  opts.variants = {"int9"};
  CHECK_THROWS_AS(plan_jobs(specs, profiles, opts), Error);
  opts.variants.clear();
  opts.backends = {"tvm"};
  CHECK_THROWS_AS(plan_jobs(specs, profiles, opts), Error);
  opts.backends.clear();
  opts.devices = {"h100"};
  CHECK_THROWS_AS(plan_jobs(specs, profiles, opts), Error);
}

TEST_CASE("pipeline runs a small matrix end to end") {
  PipelineOptions opts = base_options("pipeline_small");
  opts.models = {"fc0", "fc_sinus"};
  opts.variants = {"basic", "int8_only"};

  PipelineResult result = run_pipeline(opts);
  CHECK(result.report.records.size() == 2 * 2 * 4 * 2);
  CHECK(result.ok + result.skipped + result.failed ==
        result.report.records.size());
  CHECK(result.ok > 0);
  CHECK(result.skipped > 0);  // int8_only on crystal-rt, at least
  CHECK(result.from_cache == 0);

  for (const auto& r : result.report.records) {
    CAPTURE(r.model + "/" + r.variant + "/" + r.backend + "/" + r.device);
    CHECK((r.status == "ok" || r.status == "skipped" ||
           r.status == "runtime_alloc_fail" ||
           r.status == "device_memory_overflow" ||
           r.status == "unsupported_model" || r.status == "infeasible" ||
           r.status == "error"));
    if (r.status == "ok") {
      CHECK(r.flash_bytes > 0);
      CHECK(r.ram_bytes > 0);
      CHECK(r.arena_bytes > 0);
      CHECK(r.exe_ms_mean > 0.0);
      CHECK(r.exe_ms_std == 0.0);
      if (r.variant == "basic") CHECK(r.error == 0.0);
      if (r.variant == "int8_only") CHECK(r.error > 0.0);
    } else {
      CHECK_FALSE(r.detail.empty());
    }
  }

  // Records arrive sorted.
  for (std::size_t i = 1; i < result.report.records.size(); ++i) {
    const auto& a = result.report.records[i - 1];
    const auto& b = result.report.records[i];
    auto ka = std::tie(a.model, a.variant, a.backend, a.device);
    auto kb = std::tie(b.model, b.variant, b.backend, b.device);
    CHECK(ka <= kb);
  }

  CHECK(std::filesystem::exists(opts.out_dir / "report.csv"));
  CHECK(std::filesystem::exists(opts.out_dir / "report.json"));
  CHECK(std::filesystem::exists(opts.out_dir / "report.md"));
}

TEST_CASE("second run is served from the cache byte-identically") {
  PipelineOptions opts = base_options("pipeline_cache");
  opts.models = {"fc1"};
  opts.variants = {"basic", "int8"};
  opts.backends = {"interpreter-rt"};

  PipelineResult first = run_pipeline(opts);
  std::string csv1 = testutil::read_file(opts.out_dir / "report.csv");
  REQUIRE(first.ok > 0);
  CHECK(first.from_cache == 0);

  PipelineResult second = run_pipeline(opts);
  std::string csv2 = testutil::read_file(opts.out_dir / "report.csv");
  CHECK(second.from_cache == first.ok + first.failed);
  CHECK(csv1 == csv2);

  // Cache off recomputes but must reproduce the same bytes.
  opts.use_cache = false;
  PipelineResult third = run_pipeline(opts);
  CHECK(third.from_cache == 0);
  CHECK(testutil::read_file(opts.out_dir / "report.csv") == csv1);
}

TEST_CASE("arena search cell reproduces the planner verdict") {
  PipelineOptions opts = base_options("pipeline_arena");
  ArenaSearchCell cell = arena_search_cell(opts, "fc3", "basic",
                                           "interpreter-rt", "cm4f-sim");
  CHECK(cell.model == "fc3");
  CHECK(cell.resolution == select_resolution(cell.estimate_bytes));
  CHECK(cell.search.best_bytes % cell.resolution == 0);
  CHECK(cell.search.best_bytes > 0);
  CHECK_FALSE(cell.search.log.empty());
  // The best size admits the plan; one unit less does not.
  bool saw_correct = false;
  for (const auto& t : cell.search.log) {
    if (t.outcome == TrialOutcome::kCorrect) {
      saw_correct = true;
      CHECK(t.guess_bytes >= cell.search.best_bytes);
    }
  }
  CHECK(saw_correct);

  CHECK_THROWS_AS(arena_search_cell(opts, "fc3", "warp9", "interpreter-rt",
                                    "cm4f-sim"),
                  Error);
  CHECK_THROWS_AS(arena_search_cell(opts, "fc3", "basic", "interpreter-rt",
                                    "z80"),
                  Error);
  // RNN models cannot target the compiled backend at all.
  CHECK_THROWS_AS(arena_search_cell(opts, "gru", "basic", "compiled-rt",
                                    "cm4f-sim"),
                  Error);

  ArenaSearchCell coarse = arena_search_cell(opts, "fc3", "basic",
                                             "interpreter-rt", "cm4f-sim",
                                             4096);
  CHECK(coarse.resolution == 4096);
  CHECK(coarse.search.best_bytes % 4096 == 0);
}

TEST_CASE("menu selections accept indices, names and all") {
  PipelineOptions opts;
  opts.config_dir = testutil::config_dir();

  std::istringstream in("1,3\nbasic, int8\n2\nall\n");
  std::ostringstream out;
  REQUIRE(menu_select(opts, in, out));
  auto files = list_config_files(opts.config_dir);
  REQUIRE(opts.models.size() == 2);
  CHECK(opts.models[0] == files[0].stem().string());
  CHECK(opts.models[1] == files[2].stem().string());
  CHECK(opts.variants == std::vector<std::string>{"basic", "int8"});
  REQUIRE(opts.backends.size() == 1);
  CHECK(opts.backends[0] == "compiled-rt");
  CHECK(opts.devices.empty());  // "all"
  CHECK(out.str().find("select models [all]:") != std::string::npos);

  // Empty line also means "all".
  PipelineOptions opts2;
  opts2.config_dir = testutil::config_dir();
  std::istringstream in2("\n\n\n\n");
  std::ostringstream out2;
  REQUIRE(menu_select(opts2, in2, out2));
  CHECK(opts2.models.empty());
  CHECK(opts2.variants.empty());

  // Out-of-range index is a usage error, truncated input returns false.
  PipelineOptions opts3;
  opts3.config_dir = testutil::config_dir();
  std::istringstream in3("99999\n");
  std::ostringstream out3;
  CHECK_THROWS_AS(menu_select(opts3, in3, out3), Error);

  PipelineOptions opts4;
  opts4.config_dir = testutil::config_dir();
  std::istringstream in4("1\n");
  std::ostringstream out4;
  CHECK_FALSE(menu_select(opts4, in4, out4));
}
