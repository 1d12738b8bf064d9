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
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "edgemark/error.hpp"
#include "edgemark/pipeline.hpp"
#include "edgemark/version.hpp"

namespace {

using namespace edgemark;

std::string default_out_dir() {
  const char* env = std::getenv("EDGEMARK_OUT");
  return (env && *env) ? env : "out";
}

void add_common_options(CLI::App* cmd, PipelineOptions& opts) {
  cmd->add_option("--config-dir", opts.config_dir, "Model config directory")
      ->capture_default_str();
  cmd->add_option("--out", opts.out_dir,
                  "Output directory (or EDGEMARK_OUT)")
      ->capture_default_str();
  cmd->add_option("--profiles", opts.profiles_path,
                  "Device/backend profile YAML (default: built-in)");
}

void add_matrix_options(CLI::App* cmd, PipelineOptions& opts, bool& all) {
  cmd->add_option("-m,--model", opts.models, "Model selection (default all)");
  cmd->add_option("-v,--variant", opts.variants,
                  "Variant selection (default all)");
  cmd->add_option("-b,--backend", opts.backends,
                  "Backend selection (default all)");
  cmd->add_option("-d,--device", opts.devices,
                  "Device selection (default all)");
  cmd->add_flag("--all", all, "Run the full benchmark matrix");
  cmd->add_option("-j,--jobs", opts.jobs, "Worker threads (0 = default)");
  cmd->add_flag("-q,--quiet", opts.quiet, "Suppress progress output");
}

int do_run(PipelineOptions opts, bool all) {
  if (all) {
    opts.models.clear();
    opts.variants.clear();
    opts.backends.clear();
    opts.devices.clear();
  }
  const PipelineResult result = run_pipeline(opts);
  (void)result;
  return 0;
}

const char* outcome_name(TrialOutcome o) {
  switch (o) {
    case TrialOutcome::kTooLow: return "too_low";
    case TrialOutcome::kCorrect: return "correct";
    case TrialOutcome::kTooHigh: return "too_high";
  }
  return "?";
}

int do_arena_search(const PipelineOptions& opts, const std::string& model,
                    const std::string& variant, const std::string& backend,
                    const std::string& device, std::size_t resolution) {
  const ArenaSearchCell cell =
      arena_search_cell(opts, model, variant, backend, device, resolution);
  std::printf("%s %s on %s/%s: estimate %zu B, resolution %zu B\n",
              cell.model.c_str(), cell.variant.c_str(), cell.backend.c_str(),
              cell.device.c_str(), cell.estimate_bytes, cell.resolution);
  for (std::size_t i = 0; i < cell.search.log.size(); ++i) {
    const ArenaTrial& t = cell.search.log[i];
    std::printf("trial %2zu: %6zu units %10zu B  %s\n", i + 1, t.guess_units,
                t.guess_bytes, outcome_name(t.outcome));
  }
  std::printf("minimum arena: %zu bytes (%zu trials)\n",
              cell.search.best_bytes, cell.search.trials());
  return 0;
}

int do_report(const PipelineOptions& opts, const std::string& format) {
  const auto path = opts.out_dir / "report.json";
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrKind::kIo, "no report at " + path.string() +
                                  "; run the benchmark first");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrKind::kSyntax, path.string() + ": " + e.what());
  }
  Report report;
  try {
    report.generated_at = doc.at("generated_at").get<std::string>();
    for (const auto& entry : doc.at("records")) {
      MetricsRecord r;
      r.model = entry.at("model").get<std::string>();
      r.variant = entry.at("variant").get<std::string>();
      r.backend = entry.at("backend").get<std::string>();
      r.device = entry.at("device").get<std::string>();
      r.status = entry.at("status").get<std::string>();
      if (entry.contains("detail")) {
        r.detail = entry.at("detail").get<std::string>();
      }
      if (r.ok()) {
        r.error = entry.at("error").get<double>();
        r.exe_ms_mean = entry.at("exe_ms_mean").get<double>();
        r.exe_ms_std = entry.at("exe_ms_std").get<double>();
        r.flash_bytes = entry.at("flash_bytes").get<std::size_t>();
        r.ram_bytes = entry.at("ram_bytes").get<std::size_t>();
        r.arena_bytes = entry.at("arena_bytes").get<std::size_t>();
      }
      report.records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrKind::kValidation,
                path.string() + ": malformed report: " + e.what());
  }
  if (format == "csv") {
    std::cout << render_csv(report);
  } else if (format == "json") {
    std::cout << render_json(report);
  } else {
    std::cout << render_markdown(report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EdgeMark: embedded model deployment benchmark (simulated)"};
  app.set_version_flag("--version", std::string("edgemark ") + kCodeVersion);
  app.require_subcommand(1);

  PipelineOptions run_opts;
  run_opts.out_dir = default_out_dir();
  bool run_all = false;
  bool no_cache = false;
  CLI::App* run = app.add_subcommand("run", "Run the benchmark pipeline");
  add_common_options(run, run_opts);
  add_matrix_options(run, run_opts, run_all);
  run->add_flag("--no-cache", no_cache, "Ignore and overwrite job artifacts");

  PipelineOptions menu_opts;
  menu_opts.out_dir = default_out_dir();
  bool menu_yes = false;
  CLI::App* menu =
      app.add_subcommand("menu", "Pick the benchmark matrix interactively");
  add_common_options(menu, menu_opts);
  menu->add_flag("-y,--yes", menu_yes, "Accept defaults (full matrix)");
  menu->add_option("-j,--jobs", menu_opts.jobs, "Worker threads");

  PipelineOptions search_opts;
  search_opts.out_dir = default_out_dir();
  std::string search_model, search_variant, search_backend, search_device;
  std::size_t search_resolution = 0;
  CLI::App* search = app.add_subcommand(
      "arena-search", "Minimum tensor arena search for one cell");
  add_common_options(search, search_opts);
  search->add_option("-m,--model", search_model, "Model name")->required();
  search->add_option("-v,--variant", search_variant, "Variant name")
      ->required();
  search->add_option("-b,--backend", search_backend, "Backend name")
      ->required();
  search->add_option("-d,--device", search_device, "Device name")->required();
  search->add_option("--resolution", search_resolution,
                     "Search resolution in bytes (default: by estimate)");

  PipelineOptions report_opts;
  report_opts.out_dir = default_out_dir();
  std::string report_format = "md";
  CLI::App* report =
      app.add_subcommand("report", "Render the last run's report");
  add_common_options(report, report_opts);
  report->add_option("-f,--format", report_format, "md, csv or json")
      ->check(CLI::IsMember({"md", "csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      run_opts.use_cache = !no_cache;
      return do_run(run_opts, run_all);
    }
    if (menu->parsed()) {
      if (!menu_yes) {
        if (!isatty(fileno(stdin))) {
          throw Error(ErrKind::kUsage,
                      "menu needs a terminal; pass --yes or use 'run'");
        }
        if (!menu_select(menu_opts, std::cin, std::cout)) {
          throw Error(ErrKind::kUsage, "selection aborted");
        }
      }
      return do_run(menu_opts, false);
    }
    if (search->parsed()) {
      return do_arena_search(search_opts, search_model, search_variant,
                             search_backend, search_device, search_resolution);
    }
    if (report->parsed()) {
      return do_report(report_opts, report_format);
    }
  } catch (const Error& e) {
    std::cerr << "error (" << err_kind_name(e.kind()) << "): " << e.what()
              << "\n";
    return e.kind() == ErrKind::kUsage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
