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

#include "rsam/core/client_id.h"
#include "rsam/core/descriptor.h"
#include "rsam/core/digest.h"
#include "rsam/core/lifecycle.h"

namespace rsam::gateway {

using core::EpochMs;

// Durable ledger entry for one base key. At most one per key.
struct RequestRecord {
  std::string base_key;
  std::string device_id;
  core::HttpMethod method = core::HttpMethod::kGet;
  std::string target_path;
  core::Digest body_digest{};
  std::string body;
  std::string content_type;
  core::Lifecycle lifecycle = core::Lifecycle::kReceived;
  int trial_count = 1;  // highest trial seen
  bool forced = false;
  EpochMs created_at = 0;
  std::optional<EpochMs> forwarded_at;
  std::optional<EpochMs> completed_at;

  friend bool operator==(const RequestRecord&, const RequestRecord&) = default;
};

enum class ResponseOutcome { kSuccess, kFailure };

std::string_view to_string(ResponseOutcome outcome);

inline ResponseOutcome outcome_for_status(int status) {
  return status >= 200 && status < 300 ? ResponseOutcome::kSuccess
                                        : ResponseOutcome::kFailure;
}

// One upstream answer for one forwarded trial; body kept verbatim.
struct ResponseRecord {
  std::string base_key;
  int status_code = 0;
  std::string body;
  std::string content_type;
  ResponseOutcome outcome = ResponseOutcome::kFailure;
  EpochMs received_at = 0;
  int trial = 1;

  friend bool operator==(const ResponseRecord&, const ResponseRecord&) = default;
};

// Surface state shown by the management API. Adds IN_DOUBT_WINDOW for
// FORWARDED records with no response and no request in flight.
inline constexpr std::string_view kInDoubtWindow = "IN_DOUBT_WINDOW";

struct RequestSummary {
  std::string base_key;
  std::string device_id;
  core::HttpMethod method = core::HttpMethod::kGet;
  std::string target_path;
  std::string state;
  int trial_count = 0;
  EpochMs created_at = 0;
  std::optional<EpochMs> forwarded_at;
  std::optional<EpochMs> completed_at;
  std::optional<ResponseOutcome> latest_outcome;
};

}  // namespace rsam::gateway
