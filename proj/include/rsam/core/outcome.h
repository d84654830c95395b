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

#include <optional>
#include <string>
#include <string_view>

namespace rsam::core {

enum class OutcomeState { kSucceeded, kFailed, kCached, kDoubt };

std::string_view to_string(OutcomeState state);
std::optional<OutcomeState> parse_outcome_state(std::string_view text);

// What the host application is notified with. A DOUBT outcome never carries
// a payload; a CACHED payload is a stored successful upstream body.
struct RsamOutcome {
  OutcomeState state = OutcomeState::kFailed;
  std::string payload;
  std::string message;
  std::string base_key;
  int status_code = 0;

  friend bool operator==(const RsamOutcome&, const RsamOutcome&) = default;
};

}  // namespace rsam::core
