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
#include "edgemark/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "edgemark/dataset.hpp"
#include "edgemark/error.hpp"
#include "edgemark/execute.hpp"
#include "edgemark/graph.hpp"
#include "edgemark/hash.hpp"
#include "edgemark/prng.hpp"
#include "edgemark/version.hpp"

namespace edgemark {
namespace {

// Weight streams use small creation ordinals; keep these far away.
constexpr std::uint64_t kCalibOrdinal = 1000003;
constexpr std::uint64_t kEvalOrdinal = 1000033;

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

std::vector<int> select_model_indices(const std::vector<ModelSpec>& all,
                                      const std::vector<std::string>& wanted) {
  std::vector<int> out;
  if (wanted.empty()) {
    for (int i = 0; i < static_cast<int>(all.size()); ++i) out.push_back(i);
    return out;
  }
  for (const auto& name : wanted) {
    auto it = std::find_if(all.begin(), all.end(),
                           [&](const ModelSpec& s) { return s.name == name; });
    if (it == all.end()) {
      std::vector<std::string> names;
      for (const auto& s : all) names.push_back(s.name);
      throw Error(ErrKind::kUsage, "unknown model '" + name +
                                       "' (available: " + join_names(names) +
                                       ")");
    }
    out.push_back(static_cast<int>(it - all.begin()));
  }
  return out;
}

std::vector<ModelSpec> select_models(const std::vector<ModelSpec>& all,
                                     const std::vector<std::string>& wanted) {
  std::vector<ModelSpec> out;
  for (int i : select_model_indices(all, wanted)) out.push_back(all[i]);
  return out;
}

std::vector<VariantDescriptor> select_variants(
    const std::vector<std::string>& wanted) {
  if (wanted.empty()) return all_variants();
  std::vector<VariantDescriptor> out;
  for (const auto& name : wanted) {
    auto vd = VariantDescriptor::parse(name);
    if (!vd) {
      throw Error(ErrKind::kUsage, "unknown variant '" + name + "'");
    }
    out.push_back(*vd);
  }
  return out;
}

std::vector<int> select_backends(const ProfileSet& profiles,
                                 const std::vector<std::string>& wanted) {
  std::vector<int> out;
  if (wanted.empty()) {
    for (int i = 0; i < static_cast<int>(profiles.backends.size()); ++i) {
      out.push_back(i);
    }
    return out;
  }
  for (const auto& name : wanted) {
    int found = -1;
    for (int i = 0; i < static_cast<int>(profiles.backends.size()); ++i) {
      if (profiles.backends[i].name == name) found = i;
    }
    if (found < 0) {
      std::vector<std::string> names;
      for (const auto& b : profiles.backends) names.push_back(b.name);
      throw Error(ErrKind::kUsage, "unknown backend '" + name +
                                       "' (available: " + join_names(names) +
                                       ")");
    }
    out.push_back(found);
  }
  return out;
}

std::vector<int> select_devices(const ProfileSet& profiles,
                                const std::vector<std::string>& wanted) {
  std::vector<int> out;
  if (wanted.empty()) {
    for (int i = 0; i < static_cast<int>(profiles.devices.size()); ++i) {
      out.push_back(i);
    }
    return out;
  }
  for (const auto& name : wanted) {
    int found = -1;
    for (int i = 0; i < static_cast<int>(profiles.devices.size()); ++i) {
      if (profiles.devices[i].name == name) found = i;
    }
    if (found < 0) {
      std::vector<std::string> names;
      for (const auto& d : profiles.devices) names.push_back(d.name);
      throw Error(ErrKind::kUsage, "unknown device '" + name +
                                       "' (available: " + join_names(names) +
                                       ")");
    }
    out.push_back(found);
  }
  return out;
}

ProfileSet resolve_profiles(const PipelineOptions& opts) {
  if (opts.profiles_path.empty()) return default_profiles();
  return load_profiles(opts.profiles_path);
}

nlohmann::ordered_json record_to_json(const MetricsRecord& r,
                                      std::uint64_t key) {
  nlohmann::ordered_json doc;
  doc["key"] = hash_hex(key);
  doc["code_version"] = kCodeVersion;
  doc["model"] = r.model;
  doc["variant"] = r.variant;
  doc["backend"] = r.backend;
  doc["device"] = r.device;
  doc["status"] = r.status;
  doc["detail"] = r.detail;
  doc["error"] = r.error;
  doc["exe_ms_mean"] = r.exe_ms_mean;
  doc["exe_ms_std"] = r.exe_ms_std;
  doc["flash_bytes"] = r.flash_bytes;
  doc["ram_bytes"] = r.ram_bytes;
  doc["arena_bytes"] = r.arena_bytes;
  return doc;
}

std::optional<MetricsRecord> load_cached(const std::filesystem::path& file,
                                         const MetricsRecord& expect,
                                         std::uint64_t key) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  try {
    if (doc.at("key").get<std::string>() != hash_hex(key)) return std::nullopt;
    if (doc.at("model").get<std::string>() != expect.model ||
        doc.at("variant").get<std::string>() != expect.variant ||
        doc.at("backend").get<std::string>() != expect.backend ||
        doc.at("device").get<std::string>() != expect.device) {
      return std::nullopt;
    }
    MetricsRecord r = expect;
    r.status = doc.at("status").get<std::string>();
    r.detail = doc.at("detail").get<std::string>();
    r.error = doc.at("error").get<double>();
    r.exe_ms_mean = doc.at("exe_ms_mean").get<double>();
    r.exe_ms_std = doc.at("exe_ms_std").get<double>();
    r.flash_bytes = doc.at("flash_bytes").get<std::size_t>();
    r.ram_bytes = doc.at("ram_bytes").get<std::size_t>();
    r.arena_bytes = doc.at("arena_bytes").get<std::size_t>();
    return r;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

void store_cached(const std::filesystem::path& file, const MetricsRecord& r,
                  std::uint64_t key) {
  std::ofstream out(file, std::ios::binary);
  if (!out) return;  // a cold cache next run, not a failure
  out << record_to_json(r, key).dump(2) << "\n";
}

// Deploys one cell: arena estimate, minimum-arena search, final deployment,
// footprint and timing metrics. The deployment error is precomputed per
// variant; simulated outputs do not depend on the backend or device.
MetricsRecord run_cell(const Graph& g, const VariantDescriptor& vd,
                       const BackendProfile& backend,
                       const DeviceProfile& device, double variant_error,
                       MetricsRecord r) {
  const SampleSet no_inputs;
  const AllocationPlan plan = plan_arena(g, vd);
  const std::size_t raw = estimate_arena(g, backend.arena_overhead, 1);
  const std::size_t resolution = select_resolution(raw);
  const std::size_t estimate =
      estimate_arena(g, backend.arena_overhead, resolution);

  // Flash does not depend on the arena, so an overflow is final.
  const Footprint pre =
      compute_footprint(g, vd, backend, device, estimate, plan.peak);
  if (!pre.flash_ok) {
    const DeploymentResult dep =
        deploy_model(g, vd, backend, device, estimate, no_inputs);
    r.status = deploy_status_name(dep.status);
    r.detail = dep.reason;
    return r;
  }

  ArenaSearchParams params;
  params.resolution = resolution;
  std::size_t best = 0;
  try {
    const ArenaSearchResult search = find_min_arena(
        [&](std::size_t bytes) {
          return arena_trial(g, vd, backend, device, plan.peak, bytes);
        },
        estimate, params);
    best = search.best_bytes;
  } catch (const Error& e) {
    if (e.kind() == ErrKind::kInfeasible) {
      r.status = "infeasible";
      r.detail = e.what();
      return r;
    }
    throw;
  }

  const DeploymentResult dep =
      deploy_model(g, vd, backend, device, best, no_inputs);
  r.status = deploy_status_name(dep.status);
  if (!dep.ok()) {
    r.detail = dep.reason;
    return r;
  }

  r.error = variant_error;
  const TimingStats ts = timing_stats(dep.cycles_per_run, device.clock_hz);
  r.exe_ms_mean = ts.mean_ms;
  r.exe_ms_std = ts.std_ms;
  r.flash_bytes = dep.footprint.flash_total;
  r.ram_bytes = dep.footprint.ram_total;
  r.arena_bytes = dep.footprint.arena_bytes;
  return r;
}

}  // namespace

std::uint64_t calibration_seed(const ModelSpec& spec) {
  return substream_seed(spec.random_seed, kCalibOrdinal);
}

std::uint64_t evaluation_seed(const ModelSpec& spec) {
  return substream_seed(spec.random_seed, kEvalOrdinal);
}

std::uint64_t job_key(const ModelSpec& spec, const VariantDescriptor& vd,
                      const BackendProfile& backend,
                      const DeviceProfile& device) {
  return Fnv1a64()
      .update_value(spec_hash(spec))
      .update(vd.name())
      .update_value(backend.content_hash())
      .update_value(device.content_hash())
      .update(kCodeVersion)
      .digest();
}

std::vector<BenchmarkJob> plan_jobs(const std::vector<ModelSpec>& specs,
                                    const ProfileSet& profiles,
                                    const PipelineOptions& opts) {
  const auto models = select_model_indices(specs, opts.models);
  const auto variants = select_variants(opts.variants);
  const auto backends = select_backends(profiles, opts.backends);
  const auto devices = select_devices(profiles, opts.devices);

  std::vector<BenchmarkJob> jobs;
  jobs.reserve(models.size() * variants.size() * backends.size() *
               devices.size());
  for (int m : models) {
    const Graph base = build_graph(specs[m]);
    for (const auto& vd : variants) {
      for (int b : backends) {
        const auto skip =
            check_capabilities(base, vd, profiles.backends[b]);
        for (int d : devices) {
          BenchmarkJob job;
          job.model = m;
          job.variant = vd;
          job.backend = b;
          job.device = d;
          job.key = job_key(specs[m], vd, profiles.backends[b],
                            profiles.devices[d]);
          job.skip = skip;
          jobs.push_back(std::move(job));
        }
      }
    }
  }
  return jobs;
}

PipelineResult run_pipeline(const PipelineOptions& opts) {
  const auto all_specs = scan_config_dir(opts.config_dir);
  const auto specs = select_models(all_specs, opts.models);
  if (specs.empty()) {
    throw Error(ErrKind::kUsage,
                "no model configs in " + opts.config_dir.string());
  }
  const ProfileSet profiles = resolve_profiles(opts);
  const auto jobs = plan_jobs(specs, profiles, opts);

  if (opts.jobs > 0) omp_set_num_threads(opts.jobs);

  const std::filesystem::path artifact_dir =
      opts.out_dir / "artifacts" / "jobs";
  std::filesystem::create_directories(artifact_dir);

  PipelineResult result;
  result.out_dir = opts.out_dir;
  result.report.records.resize(jobs.size());

  if (!opts.quiet) {
    std::printf("%zu models x %zu cells -> %zu jobs\n", specs.size(),
                jobs.size() / std::max<std::size_t>(specs.size(), 1),
                jobs.size());
  }

  // Jobs are model-major; process each model's contiguous block.
  std::size_t lo = 0;
  while (lo < jobs.size()) {
    const int m = jobs[lo].model;
    std::size_t hi = lo;
    while (hi < jobs.size() && jobs[hi].model == m) ++hi;
    const ModelSpec& spec = specs[m];

    std::vector<std::size_t> pending;
    for (std::size_t j = lo; j < hi; ++j) {
      const BenchmarkJob& job = jobs[j];
      MetricsRecord base_record;
      base_record.model = spec.name;
      base_record.variant = job.variant.name();
      base_record.backend = profiles.backends[job.backend].name;
      base_record.device = profiles.devices[job.device].name;
      if (job.skip) {
        base_record.status = "skipped";
        base_record.detail = job.skip->to_string();
        result.report.records[j] = std::move(base_record);
        continue;
      }
      if (opts.use_cache) {
        auto cached = load_cached(artifact_dir / (hash_hex(job.key) + ".json"),
                                  base_record, job.key);
        if (cached) {
          ++result.from_cache;
          result.report.records[j] = std::move(*cached);
          continue;
        }
      }
      result.report.records[j] = std::move(base_record);
      pending.push_back(j);
    }

    if (!pending.empty()) {
      const Graph base = build_graph(spec);
      if (!opts.quiet) {
        const ModelStats stats = model_stats(base);
        std::printf("[gen] %s: params=%lld macs=%lld\n", spec.name.c_str(),
                    static_cast<long long>(stats.param_count),
                    static_cast<long long>(stats.mac_count));
      }
      const SampleSet eval =
          generate_samples(spec.dataset, kEvalSamples, evaluation_seed(spec));
      const auto reference = run_reference(base, eval);
      const SampleSet calib = generate_samples(
          spec.dataset, kCalibrationSamples, calibration_seed(spec));

      // Convert each needed variant once and measure its deployment error
      // once; cells share the converted graph read-only.
      std::map<std::string, Graph> converted;
      std::map<std::string, double> variant_error;
      std::map<std::string, std::string> variant_failure;
      for (std::size_t j : pending) {
        const std::string vname = jobs[j].variant.name();
        if (converted.count(vname) || variant_failure.count(vname)) continue;
        try {
          Graph g = apply_variant(base, jobs[j].variant, &calib);
          std::vector<std::vector<float>> outputs;
          outputs.reserve(eval.size());
          for (const auto& input : eval.inputs) {
            outputs.push_back(execute_graph(g, input).as_f32());
          }
          variant_error[vname] = deployment_error(reference, outputs);
          converted.emplace(vname, std::move(g));
        } catch (const std::exception& e) {
          variant_failure[vname] = e.what();
        }
      }

      const auto count = static_cast<std::ptrdiff_t>(pending.size());
#pragma omp parallel for schedule(dynamic)
      for (std::ptrdiff_t p = 0; p < count; ++p) {
        const std::size_t j = pending[static_cast<std::size_t>(p)];
        const BenchmarkJob& job = jobs[j];
        const std::string vname = job.variant.name();
        MetricsRecord r = result.report.records[j];
        try {
          auto failed = variant_failure.find(vname);
          if (failed != variant_failure.end()) {
            r.status = "error";
            r.detail = failed->second;
          } else {
            r = run_cell(converted.at(vname), job.variant,
                         profiles.backends[job.backend],
                         profiles.devices[job.device],
                         variant_error.at(vname), std::move(r));
          }
        } catch (const std::exception& e) {
          r.status = "error";
          r.detail = e.what();
        }
        if (opts.use_cache) {
          store_cached(artifact_dir / (hash_hex(job.key) + ".json"), r,
                       job.key);
        }
        if (!opts.quiet) {
#pragma omp critical(edgemark_log)
          std::printf("[deploy] %s %s %s %s: %s\n", r.model.c_str(),
                      r.variant.c_str(), r.backend.c_str(), r.device.c_str(),
                      r.status.c_str());
        }
        result.report.records[j] = std::move(r);
      }
    }
    lo = hi;
  }

  for (const auto& r : result.report.records) {
    if (r.ok()) {
      ++result.ok;
    } else if (r.status == "skipped") {
      ++result.skipped;
    } else {
      ++result.failed;
    }
  }

  sort_records(result.report.records);
  result.report.generated_at = current_timestamp();
  write_reports(result.report, opts.out_dir);
  if (!opts.quiet) {
    std::printf("%zu ok, %zu skipped, %zu failed (%zu from cache) -> %s\n",
                result.ok, result.skipped, result.failed, result.from_cache,
                opts.out_dir.string().c_str());
  }
  return result;
}

ArenaSearchCell arena_search_cell(const PipelineOptions& opts,
                                  const std::string& model,
                                  const std::string& variant,
                                  const std::string& backend,
                                  const std::string& device,
                                  std::size_t resolution_override) {
  PipelineOptions sel = opts;
  sel.models = {model};
  const auto specs = select_models(scan_config_dir(opts.config_dir),
                                   sel.models);
  const ModelSpec& spec = specs.front();
  const ProfileSet profiles = resolve_profiles(opts);

  auto vd = VariantDescriptor::parse(variant);
  if (!vd) throw Error(ErrKind::kUsage, "unknown variant '" + variant + "'");
  const BackendProfile* bp = profiles.backend(backend);
  if (!bp) throw Error(ErrKind::kUsage, "unknown backend '" + backend + "'");
  const DeviceProfile* dp = profiles.device(device);
  if (!dp) throw Error(ErrKind::kUsage, "unknown device '" + device + "'");

  const Graph base = build_graph(spec);
  if (auto inc = check_capabilities(base, *vd, *bp)) {
    throw Error(ErrKind::kUnsupportedModel, inc->to_string());
  }
  const SampleSet calib = generate_samples(
      spec.dataset, kCalibrationSamples, calibration_seed(spec));
  const Graph g = apply_variant(base, *vd, &calib);

  const AllocationPlan plan = plan_arena(g, *vd);
  const std::size_t raw = estimate_arena(g, bp->arena_overhead, 1);

  ArenaSearchCell cell;
  cell.model = model;
  cell.variant = vd->name();
  cell.backend = backend;
  cell.device = device;
  cell.resolution =
      resolution_override ? resolution_override : select_resolution(raw);
  cell.estimate_bytes = estimate_arena(g, bp->arena_overhead, cell.resolution);

  ArenaSearchParams params;
  params.resolution = cell.resolution;
  cell.search = find_min_arena(
      [&](std::size_t bytes) {
        return arena_trial(g, *vd, *bp, *dp, plan.peak, bytes);
      },
      cell.estimate_bytes, params);
  return cell;
}

namespace {

// "1,3" or "fc0, lstm" or empty/all/*; 1-based indices.
std::vector<std::string> parse_selection(const std::string& line,
                                         const std::vector<std::string>& names,
                                         const char* what) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto b = token.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = token.find_last_not_of(" \t");
    token = token.substr(b, e - b + 1);
    if (token == "all" || token == "*") return {};
    bool numeric = !token.empty() &&
                   token.find_first_not_of("0123456789") == std::string::npos;
    if (numeric) {
      const std::size_t idx = std::stoul(token);
      if (idx < 1 || idx > names.size()) {
        throw Error(ErrKind::kUsage, std::string(what) + " index " + token +
                                         " out of range");
      }
      out.push_back(names[idx - 1]);
    } else {
      if (std::find(names.begin(), names.end(), token) == names.end()) {
        throw Error(ErrKind::kUsage,
                    std::string("unknown ") + what + " '" + token + "'");
      }
      out.push_back(token);
    }
  }
  return out;
}

bool prompt_list(std::istream& in, std::ostream& out, const char* what,
                 const std::vector<std::string>& names,
                 std::vector<std::string>& selection) {
  out << what << ":\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << "  " << (i + 1) << ") " << names[i] << "\n";
  }
  out << "select " << what << " [all]: " << std::flush;
  std::string line;
  if (!std::getline(in, line)) return false;
  selection = parse_selection(line, names, what);
  return true;
}

}  // namespace

bool menu_select(PipelineOptions& opts, std::istream& in, std::ostream& out) {
  std::vector<std::string> model_names;
  for (const auto& f : list_config_files(opts.config_dir)) {
    model_names.push_back(f.stem().string());
  }
  std::vector<std::string> variant_names;
  for (const auto& vd : all_variants()) variant_names.push_back(vd.name());
  const ProfileSet profiles = resolve_profiles(opts);
  std::vector<std::string> backend_names, device_names;
  for (const auto& b : profiles.backends) backend_names.push_back(b.name);
  for (const auto& d : profiles.devices) device_names.push_back(d.name);

  return prompt_list(in, out, "models", model_names, opts.models) &&
         prompt_list(in, out, "variants", variant_names, opts.variants) &&
         prompt_list(in, out, "backends", backend_names, opts.backends) &&
         prompt_list(in, out, "devices", device_names, opts.devices);
}

}  // namespace edgemark
