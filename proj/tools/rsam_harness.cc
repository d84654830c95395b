// Copyright 2026 The RSAM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// rsam-harness: fault scenarios, benchmark and crash injection.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "rsam/harness/bench.h"
#include "rsam/harness/crash.h"
#include "rsam/harness/process.h"
#include "rsam/harness/scenarios.h"

namespace {

std::filesystem::path make_work_dir(const std::string& requested) {
  if (!requested.empty()) {
    std::filesystem::create_directories(requested);
    return requested;
  }
  auto dir = std::filesystem::temp_directory_path() /
             ("rsam-harness-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RSAM fault harness"};
  app.require_subcommand(1);
  std::string work;
  bool keep = false;
  app.add_option("--work-dir", work, "Where stores and logs go (default: a temp dir)");
  app.add_flag("--keep", keep, "Keep the work dir afterwards");

  auto* scenarios = app.add_subcommand("scenarios", "Run the fault-matrix rows");
  std::string only;
  scenarios->add_option("--only", only, "Row number or name");

  auto* bench = app.add_subcommand("bench", "Compare the direct and middleware routes");
  std::string sizes = "1k,64k,1m,4m", out;
  long long latency_ms = 200;
  int reps = 5;
  bench->add_option("--sizes", sizes, "Comma-separated payload classes");
  bench->add_option("--latency-ms", latency_ms, "Simulated upstream latency");
  bench->add_option("--reps", reps, "Repetitions per cell")->check(CLI::PositiveNumber);
  bench->add_option("--out", out, "CSV output file");

  auto* crash = app.add_subcommand("crash", "Kill the gateway at a point and restart it");
  std::string point = "after-forward", gateway_bin;
  crash->add_option("--point", point, "Crash point");
  crash->add_option("--gateway", gateway_bin, "rsam-gateway binary (default: next to this one)");
  CLI11_PARSE(app, argc, argv);

  const auto dir = make_work_dir(work);
  int rc = 0;
  try {
    if (*scenarios) {
      std::vector<rsam::harness::ScenarioReport> reports;
      if (only.empty()) {
        reports = rsam::harness::run_all_scenarios(dir);
      } else {
        try {
          reports.push_back(rsam::harness::run_scenario(only, dir));
        } catch (const rsam::harness::ScenarioFailed& f) {
          reports.push_back(f.report());
        }
      }
      int passed = 0;
      for (const auto& r : reports) {
        std::cout << rsam::harness::format_report(r);
        passed += r.passed() ? 1 : 0;
      }
      std::cout << passed << "/" << reports.size() << " scenarios passed\n";
      rc = passed == static_cast<int>(reports.size()) ? 0 : 2;
    } else if (*bench) {
      rsam::harness::BenchOptions opts;
      opts.sizes.clear();
      std::stringstream ss(sizes);
      for (std::string s; std::getline(ss, s, ',');) {
        opts.sizes.push_back(rsam::harness::parse_size(s));
      }
      opts.latency = std::chrono::milliseconds(latency_ms);
      opts.repetitions = reps;
      opts.work_dir = dir;
      auto report = rsam::harness::run_bench(opts);
      std::cout << report.table();
      if (!out.empty()) {
        std::ofstream(out) << report.csv();
        std::cout << "csv written to " << out << "\n";
      }
    } else if (*crash) {
      rsam::harness::CrashOptions opts;
      opts.point = rsam::gateway::parse_crash_point(point);
      opts.gateway_binary = gateway_bin.empty()
                                ? rsam::harness::self_dir() / "rsam-gateway"
                                : std::filesystem::path(gateway_bin);
      opts.work_dir = dir;
      try {
        std::cout << rsam::harness::format_report(rsam::harness::crash_injection(opts));
      } catch (const rsam::harness::ScenarioFailed& f) {
        std::cout << rsam::harness::format_report(f.report());
        rc = 2;
      }
    }
  } catch (const rsam::RsamError& e) {
    std::cerr << "rsam-harness: " << rsam::to_string(e.code()) << ": " << e.what() << "\n";
    rc = 1;
  }
  if (!keep && work.empty()) {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }
  return rc;
}
