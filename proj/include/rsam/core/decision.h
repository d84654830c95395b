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

#include "rsam/core/client_id.h"
#include "rsam/core/lifecycle.h"

namespace rsam::core {

enum class Decision {
  kForwardFirstTime,
  kForwardRetry,
  kServeCached,
  kDoubt,
  kRejectInvalid,
};

std::string_view to_string(Decision decision);

// Everything the gateway knows when a request arrives for a base key.
struct DecisionInput {
  // Lifecycle of the stored record for this base key; nullopt when none.
  std::optional<Lifecycle> stored;
  // A SUCCESS response is on file for the stored record.
  bool has_succeeded_response = false;
  bool request_forced = false;
  bool descriptor_forced = false;
  bool idempotent = false;
  // Body digest, method and target of the resubmission equal the stored ones.
  bool body_digest_matches = true;
};

// Total and deterministic. Rules, first match wins:
//   1. no live record (absent or DELETED)        -> FORWARD_FIRST_TIME
//   2. resubmission differs from stored request  -> REJECT_INVALID
//   3. forced on the id or on the descriptor     -> FORWARD_RETRY
//   4. a SUCCESS response is on file             -> SERVE_CACHED
//   5. RECEIVED or FAILED                        -> FORWARD_RETRY
//   6. FORWARDED/SUCCEEDED without a success:
//        idempotent -> FORWARD_RETRY, otherwise  -> DOUBT
Decision decide(const DecisionInput& input);

Decision decide(std::optional<Lifecycle> stored, bool has_succeeded_response,
                const ClientRequestId& incoming, bool descriptor_forced,
                bool idempotent, bool body_digest_matches);

}  // namespace rsam::core
