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
#include <string_view>

namespace rsam::core {

// Gateway-side lifecycle of a persisted request.
//
//   RECEIVED  --FORWARD-->      FORWARDED
//   FORWARDED --UPSTREAM_OK-->  SUCCEEDED
//   FORWARDED --UPSTREAM_ERR--> FAILED
//   FAILED    --RETRY-->        FORWARDED
//   FORWARDED --RETRY-->        FORWARDED  (re-forward from the crash window)
//   any       --DELETE-->       DELETED    (absorbing)
//
// A FORWARDED record with no response on file is the crash-window signature.
enum class Lifecycle { kReceived, kForwarded, kSucceeded, kFailed, kDeleted };

enum class LifecycleEvent { kForward, kUpstreamOk, kUpstreamErr, kRetry, kDelete };

inline constexpr Lifecycle kAllLifecycles[] = {
    Lifecycle::kReceived, Lifecycle::kForwarded, Lifecycle::kSucceeded,
    Lifecycle::kFailed, Lifecycle::kDeleted};

inline constexpr LifecycleEvent kAllLifecycleEvents[] = {
    LifecycleEvent::kForward, LifecycleEvent::kUpstreamOk,
    LifecycleEvent::kUpstreamErr, LifecycleEvent::kRetry,
    LifecycleEvent::kDelete};

std::string_view to_string(Lifecycle state);
std::string_view to_string(LifecycleEvent event);
std::optional<Lifecycle> parse_lifecycle(std::string_view text);

// Next state, or nullopt when the pair is not in the table.
std::optional<Lifecycle> try_transition(Lifecycle current, LifecycleEvent event);

// Throws RsamError(kIllegalTransition) when the pair is not in the table.
Lifecycle transition(Lifecycle current, LifecycleEvent event);

}  // namespace rsam::core
