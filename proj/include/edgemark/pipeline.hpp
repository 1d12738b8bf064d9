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
#ifndef EDGEMARK_PIPELINE_HPP_
#define EDGEMARK_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "edgemark/config.hpp"
#include "edgemark/device_sim.hpp"
#include "edgemark/mem_plan.hpp"
#include "edgemark/optimize.hpp"
#include "edgemark/report.hpp"

namespace edgemark {

// Inputs used to judge deployment error, drawn once per model.
inline constexpr int kEvalSamples = 10;

// Sample streams for calibration and evaluation. Large ordinals keep them
// clear of the per-tensor weight streams.
std::uint64_t calibration_seed(const ModelSpec& spec);
std::uint64_t evaluation_seed(const ModelSpec& spec);

struct PipelineOptions {
  std::filesystem::path config_dir = "configs";
  std::filesystem::path out_dir = "out";
  std::filesystem::path profiles_path;  // empty selects built-in profiles
  // Empty selector means "all". Models match config file stems.
  std::vector<std::string> models;
  std::vector<std::string> variants;
  std::vector<std::string> backends;
  std::vector<std::string> devices;
  int jobs = 0;  // worker threads, 0 = runtime default
  bool use_cache = true;
  bool quiet = false;
};

// One benchmark matrix cell. Jobs failing the capability check carry their
// skip reason and never reach deployment.
struct BenchmarkJob {
  int model = 0;    // index into the selected spec list
  VariantDescriptor variant;
  int backend = 0;  // index into ProfileSet::backends
  int device = 0;   // index into ProfileSet::devices
  std::uint64_t key = 0;
  std::optional<Incompatibility> skip;
};

// Cache key of a cell: model spec content, variant, backend and device
// profile content, and the code version.
std::uint64_t job_key(const ModelSpec& spec, const VariantDescriptor& vd,
                      const BackendProfile& backend,
                      const DeviceProfile& device);

// Expands selections into a deterministic job list: models in config order,
// then variants, backends, devices. Unknown selector names are usage errors.
std::vector<BenchmarkJob> plan_jobs(const std::vector<ModelSpec>& specs,
                                    const ProfileSet& profiles,
                                    const PipelineOptions& opts);

struct PipelineResult {
  Report report;
  std::size_t ok = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  std::size_t from_cache = 0;
  std::filesystem::path out_dir;
};

// Runs the full benchmark: generate, optimize, convert, deploy, report.
// Writes report.csv / report.json / report.md plus per-job artifacts under
// the output directory. Deployment failures become records, not errors.
PipelineResult run_pipeline(const PipelineOptions& opts);

// Minimum-arena search for a single cell, exposing the trial log.
struct ArenaSearchCell {
  std::string model, variant, backend, device;
  std::size_t estimate_bytes = 0;
  std::size_t resolution = 0;
  ArenaSearchResult search;
};
ArenaSearchCell arena_search_cell(const PipelineOptions& opts,
                                  const std::string& model,
                                  const std::string& variant,
                                  const std::string& backend,
                                  const std::string& device,
                                  std::size_t resolution_override = 0);

// Interactive selection. Reads one line per prompt (comma-separated indices
// or names, empty keeps "all"), updates opts, returns false if the stream
// ended before all prompts were answered.
bool menu_select(PipelineOptions& opts, std::istream& in, std::ostream& out);

}  // namespace edgemark

#endif  // EDGEMARK_PIPELINE_HPP_
