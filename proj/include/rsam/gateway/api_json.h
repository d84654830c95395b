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

#include <string>
#include <vector>

#include "rsam/core/outcome.h"
#include "rsam/gateway/records.h"

namespace rsam::gateway {

// JSON bodies of the management API.
std::string summaries_to_json(const std::vector<RequestSummary>& summaries);
// Throws RsamError(kIo) on malformed input.
std::vector<RequestSummary> summaries_from_json(const std::string& text);

std::string outcome_to_json(const core::RsamOutcome& outcome);
std::string deleted_to_json(std::string_view base_key);
std::string error_to_json(std::string_view code, std::string_view message);

}  // namespace rsam::gateway
