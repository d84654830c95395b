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

#include "rsam/core/decision.h"

namespace rsam::core {

std::string_view to_string(Decision decision) {
  switch (decision) {
    case Decision::kForwardFirstTime: return "FORWARD_FIRST_TIME";
    case Decision::kForwardRetry: return "FORWARD_RETRY";
    case Decision::kServeCached: return "SERVE_CACHED";
    case Decision::kDoubt: return "DOUBT";
    case Decision::kRejectInvalid: return "REJECT_INVALID";
  }
  return "?";
}

Decision decide(const DecisionInput& in) {
  if (!in.stored || *in.stored == Lifecycle::kDeleted) {
    return Decision::kForwardFirstTime;
  }
  if (!in.body_digest_matches) return Decision::kRejectInvalid;
  if (in.request_forced || in.descriptor_forced) return Decision::kForwardRetry;
  if (in.has_succeeded_response) return Decision::kServeCached;

  switch (*in.stored) {
    case Lifecycle::kReceived:
      // FORWARDED is persisted before the upstream call, so RECEIVED proves
      // the upstream was never contacted.
    case Lifecycle::kFailed:
      return Decision::kForwardRetry;
    case Lifecycle::kForwarded:
    case Lifecycle::kSucceeded:
    case Lifecycle::kDeleted:
      break;
  }
  return in.idempotent ? Decision::kForwardRetry : Decision::kDoubt;
}

Decision decide(std::optional<Lifecycle> stored, bool has_succeeded_response,
                const ClientRequestId& incoming, bool descriptor_forced,
                bool idempotent, bool body_digest_matches) {
  return decide(DecisionInput{stored, has_succeeded_response, incoming.forced,
                              descriptor_forced, idempotent,
                              body_digest_matches});
}

}  // namespace rsam::core
