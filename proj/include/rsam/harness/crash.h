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

#include <filesystem>
#include <string_view>

#include "rsam/gateway/gateway.h"
#include "rsam/harness/scenarios.h"

namespace rsam::harness {

struct CrashOptions {
  std::filesystem::path gateway_binary;
  std::filesystem::path work_dir;
  gateway::CrashPoint point = gateway::CrashPoint::kAfterForward;
};

// Runs the rsam-gateway binary under supervision: a control round with no
// injection, then a crash after forwarding a POST and a GET, a restart on the
// same port and store, and a retry of each. Expects DOUBT for the POST and
// SUCCEEDED for the GET. Throws ScenarioFailed, or
// RsamError(kInjectionUnsupportedPoint) for a point other than after-forward.
ScenarioReport crash_injection(const CrashOptions& options);

}  // namespace rsam::harness
