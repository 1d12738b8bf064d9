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
#include "edgemark/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <tuple>

#include <json.hpp>

#include "edgemark/error.hpp"
#include "edgemark/version.hpp"

namespace edgemark {
namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string g6(double v) { return fmt("%.6g", v); }
// Footprints are reported in kB (1000 bytes).
std::string kb(std::size_t bytes) {
  return fmt("%.3f", static_cast<double>(bytes) / 1000.0);
}

// RFC 4180: quote fields containing separators, quotes or newlines.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct Cells {
  std::string error, exe_ms, flash_kb, ram_kb, arena_kb;
};

Cells cells_for(const MetricsRecord& r) {
  if (!r.ok()) return {"-", "-", "-", "-", "-"};
  return {g6(r.error), g6(r.exe_ms_mean), kb(r.flash_bytes), kb(r.ram_bytes),
          kb(r.arena_bytes)};
}

}  // namespace

double deployment_error(const std::vector<std::vector<float>>& reference,
                        const std::vector<std::vector<float>>& deployed) {
  if (reference.size() != deployed.size() || reference.empty()) {
    throw Error(ErrKind::kInternal, "deployment_error: sample count mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto& ref = reference[i];
    const auto& dev = deployed[i];
    if (ref.size() != dev.size() || ref.empty()) {
      throw Error(ErrKind::kInternal, "deployment_error: output size mismatch");
    }
    double abs_sum = 0.0;
    double ref_peak = 0.0;
    for (std::size_t j = 0; j < ref.size(); ++j) {
      abs_sum += std::abs(static_cast<double>(dev[j]) - ref[j]);
      ref_peak = std::max(ref_peak, std::abs(static_cast<double>(ref[j])));
    }
    total += (abs_sum / static_cast<double>(ref.size())) / (ref_peak + 1e-9);
  }
  return total / static_cast<double>(reference.size());
}

TimingStats timing_stats(const std::vector<double>& run_cycles,
                         double clock_hz) {
  TimingStats ts;
  if (run_cycles.empty() || clock_hz <= 0) return ts;
  // Deviations are taken against the first run so a constant series yields
  // an exact zero spread.
  const double n = static_cast<double>(run_cycles.size());
  const double base = run_cycles.front() / clock_hz * 1e3;
  double sum = 0.0;
  for (double c : run_cycles) sum += c / clock_hz * 1e3 - base;
  const double mean_d = sum / n;
  double sq = 0.0;
  for (double c : run_cycles) {
    const double d = c / clock_hz * 1e3 - base - mean_d;
    sq += d * d;
  }
  ts.mean_ms = base + mean_d;
  ts.std_ms = std::sqrt(sq / n);
  return ts;
}

void sort_records(std::vector<MetricsRecord>& records) {
  std::sort(records.begin(), records.end(),
            [](const MetricsRecord& a, const MetricsRecord& b) {
              return std::tie(a.model, a.variant, a.backend, a.device) <
                     std::tie(b.model, b.variant, b.backend, b.device);
            });
}

std::string current_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string render_csv(const Report& report) {
  std::string out =
      "model,variant,backend,device,error,exe_ms,flash_kb,ram_kb,arena_kb,"
      "status\n";
  for (const auto& r : report.records) {
    const Cells c = cells_for(r);
    out += csv_field(r.model) + ',' + csv_field(r.variant) + ',' +
           csv_field(r.backend) + ',' + csv_field(r.device) + ',' + c.error +
           ',' + c.exe_ms + ',' + c.flash_kb + ',' + c.ram_kb + ',' +
           c.arena_kb + ',' + csv_field(r.status) + '\n';
  }
  return out;
}

std::string render_json(const Report& report) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["code_version"] = kCodeVersion;
  doc["generated_at"] = report.generated_at;
  doc["records"] = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json entry;
    entry["model"] = r.model;
    entry["variant"] = r.variant;
    entry["backend"] = r.backend;
    entry["device"] = r.device;
    entry["status"] = r.status;
    if (!r.detail.empty()) entry["detail"] = r.detail;
    if (r.ok()) {
      entry["error"] = r.error;
      entry["exe_ms_mean"] = r.exe_ms_mean;
      entry["exe_ms_std"] = r.exe_ms_std;
      entry["flash_bytes"] = r.flash_bytes;
      entry["ram_bytes"] = r.ram_bytes;
      entry["arena_bytes"] = r.arena_bytes;
    }
    doc["records"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::string render_markdown(const Report& report) {
  std::string out = "# EdgeMark report\n\nGenerated: " + report.generated_at +
                    "\n\n"
                    "| model | variant | backend | device | error | exe_ms | "
                    "flash_kb | ram_kb | arena_kb | status |\n"
                    "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : report.records) {
    const Cells c = cells_for(r);
    out += "| " + r.model + " | " + r.variant + " | " + r.backend + " | " +
           r.device + " | " + c.error + " | " + c.exe_ms + " | " + c.flash_kb +
           " | " + c.ram_kb + " | " + c.arena_kb + " | " + r.status + " |\n";
  }
  std::size_t ok = 0, skipped = 0, failed = 0;
  for (const auto& r : report.records) {
    if (r.ok()) {
      ++ok;
    } else if (r.status == "skipped") {
      ++skipped;
    } else {
      ++failed;
    }
  }
  out += "\n" + std::to_string(report.records.size()) + " cells: " +
         std::to_string(ok) + " ok, " + std::to_string(skipped) +
         " skipped, " + std::to_string(failed) + " failed.\n";
  return out;
}

void write_reports(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const struct {
    const char* name;
    std::string body;
  } files[] = {{"report.csv", render_csv(report)},
               {"report.json", render_json(report)},
               {"report.md", render_markdown(report)}};
  for (const auto& f : files) {
    std::ofstream out(dir / f.name, std::ios::binary);
    if (!out) {
      throw Error(ErrKind::kIo,
                  "cannot write " + (dir / f.name).string());
    }
    out << f.body;
  }
}

}  // namespace edgemark
