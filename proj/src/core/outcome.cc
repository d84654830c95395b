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

#include "rsam/core/outcome.h"

namespace rsam::core {

std::string_view to_string(OutcomeState state) {
  switch (state) {
    case OutcomeState::kSucceeded: return "SUCCEEDED";
    case OutcomeState::kFailed: return "FAILED";
    case OutcomeState::kCached: return "CACHED";
    case OutcomeState::kDoubt: return "DOUBT";
  }
  return "?";
}

std::optional<OutcomeState> parse_outcome_state(std::string_view text) {
  for (auto s : {OutcomeState::kSucceeded, OutcomeState::kFailed,
                 OutcomeState::kCached, OutcomeState::kDoubt}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

}  // namespace rsam::core
