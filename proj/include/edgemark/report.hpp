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
#ifndef EDGEMARK_REPORT_HPP_
#define EDGEMARK_REPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace edgemark {

// One benchmark matrix cell. Numeric fields are meaningful only when
// status == "ok"; every other status renders them as "-".
struct MetricsRecord {
  std::string model;
  std::string variant;
  std::string backend;
  std::string device;
  std::string status;
  std::string detail;  // skip or failure reason, empty when ok

  double error = 0.0;  // deployment error against the float reference
  double exe_ms_mean = 0.0;
  double exe_ms_std = 0.0;
  std::size_t flash_bytes = 0;
  std::size_t ram_bytes = 0;
  std::size_t arena_bytes = 0;

  bool ok() const { return status == "ok"; }
};

struct Report {
  std::string generated_at;  // one timestamp shared by all formats
  std::vector<MetricsRecord> records;
};

// Mean over inputs of mean_j |dev - ref| / (max_j |ref| + 1e-9).
// Both outer vectors must have the same length, as must each row pair.
double deployment_error(const std::vector<std::vector<float>>& reference,
                        const std::vector<std::vector<float>>& deployed);

struct TimingStats {
  double mean_ms = 0.0;
  double std_ms = 0.0;
};

// Converts per-run cycle counts into milliseconds at the given clock.
TimingStats timing_stats(const std::vector<double>& run_cycles,
                         double clock_hz);

// Stable record order: lexicographic (model, variant, backend, device).
void sort_records(std::vector<MetricsRecord>& records);

// ISO-8601 UTC wall-clock time, e.g. 2026-08-14T10:02:33Z.
std::string current_timestamp();

std::string render_csv(const Report& report);
std::string render_json(const Report& report);
std::string render_markdown(const Report& report);

// Writes report.csv, report.json and report.md under dir.
void write_reports(const Report& report, const std::filesystem::path& dir);

}  // namespace edgemark

#endif  // EDGEMARK_REPORT_HPP_
