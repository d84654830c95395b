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

#include "rsam/core/lifecycle.h"

#include <string>

#include "rsam/core/error.h"

namespace rsam::core {

std::string_view to_string(Lifecycle state) {
  switch (state) {
    case Lifecycle::kReceived: return "RECEIVED";
    case Lifecycle::kForwarded: return "FORWARDED";
    case Lifecycle::kSucceeded: return "SUCCEEDED";
    case Lifecycle::kFailed: return "FAILED";
    case Lifecycle::kDeleted: return "DELETED";
  }
  return "?";
}

std::string_view to_string(LifecycleEvent event) {
  switch (event) {
    case LifecycleEvent::kForward: return "FORWARD";
    case LifecycleEvent::kUpstreamOk: return "UPSTREAM_OK";
    case LifecycleEvent::kUpstreamErr: return "UPSTREAM_ERR";
    case LifecycleEvent::kRetry: return "RETRY";
    case LifecycleEvent::kDelete: return "DELETE";
  }
  return "?";
}

std::optional<Lifecycle> parse_lifecycle(std::string_view text) {
  for (Lifecycle s : kAllLifecycles) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<Lifecycle> try_transition(Lifecycle current, LifecycleEvent event) {
  if (current == Lifecycle::kDeleted) return std::nullopt;
  if (event == LifecycleEvent::kDelete) return Lifecycle::kDeleted;

  switch (current) {
    case Lifecycle::kReceived:
      if (event == LifecycleEvent::kForward) return Lifecycle::kForwarded;
      break;
    case Lifecycle::kForwarded:
      if (event == LifecycleEvent::kUpstreamOk) return Lifecycle::kSucceeded;
      if (event == LifecycleEvent::kUpstreamErr) return Lifecycle::kFailed;
      if (event == LifecycleEvent::kRetry) return Lifecycle::kForwarded;
      break;
    case Lifecycle::kFailed:
      if (event == LifecycleEvent::kRetry) return Lifecycle::kForwarded;
      break;
    case Lifecycle::kSucceeded:
    case Lifecycle::kDeleted:
      break;
  }
  return std::nullopt;
}

Lifecycle transition(Lifecycle current, LifecycleEvent event) {
  if (auto next = try_transition(current, event)) return *next;
  throw RsamError(ErrorCode::kIllegalTransition,
                  "illegal transition " + std::string(to_string(current)) +
                      " --" + std::string(to_string(event)) + "-->");
}

}  // namespace rsam::core
