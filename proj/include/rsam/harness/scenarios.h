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

#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rsam/core/error.h"

namespace rsam::harness {

struct Assertion {
  std::string what;
  bool passed = false;
};

struct ScenarioReport {
  int row = 0;
  std::string name;
  std::string expected;  // terminal state: SUCCEEDED, FAILED, Queued, CACHED-on-retry ...
  std::string observed;
  std::vector<Assertion> assertions;
  std::chrono::milliseconds elapsed{0};

  bool passed() const;
  // First violated assertion, or empty.
  std::string first_failure() const;
};

// Carries the whole report of a failed run.
class ScenarioFailed : public RsamError {
 public:
  explicit ScenarioFailed(ScenarioReport report);
  const ScenarioReport& report() const { return report_; }

 private:
  ScenarioReport report_;
};

// One row of the fault matrix.
struct ScenarioInfo {
  int row;
  std::string name;
  std::string mobile;
  std::string middleware;
  std::string cloud;
  std::string expected;
};

const std::vector<ScenarioInfo>& scenario_table();

// `which` is a row number ("1".."6") or a row name. Runs against a fresh
// deployment under work_dir. Throws ScenarioFailed on a violated assertion
// and RsamError(kInvalidParams) for an unknown row.
ScenarioReport run_scenario(std::string_view which, const std::filesystem::path& work_dir);

// Runs every row; never throws ScenarioFailed, failures are in the reports.
std::vector<ScenarioReport> run_all_scenarios(const std::filesystem::path& work_dir);

// `copies` concurrent submissions of one request id. Checks exactly one
// upstream invocation and copies-1 CACHED answers.
ScenarioReport run_dedup(const std::filesystem::path& work_dir, int copies = 20);

// `count` submissions to a forced service. Checks `count` invocations and no
// CACHED answer.
ScenarioReport run_forced(const std::filesystem::path& work_dir, int count = 5);

// Restarts the gateway between submissions and checks that stored outcomes
// and lifecycle states survive.
ScenarioReport run_durability(const std::filesystem::path& work_dir);

std::string format_report(const ScenarioReport& report);

}  // namespace rsam::harness
