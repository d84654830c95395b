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
#include <cstdint>
#include <string>
#include <string_view>

namespace rsam::core {

// Milliseconds since the Unix epoch.
using EpochMs = std::int64_t;

inline constexpr std::chrono::milliseconds kDefaultMaxSkew{5 * 60 * 1000};

// Globally unique identity of one logical client request.
//
// The structural part (device_id, sent_at, service_path) forms the
// deduplication key and never changes across retries; the behavioral part
// (trial, forced) tells the gateway how to treat this particular attempt.
struct ClientRequestId {
  std::string device_id;
  EpochMs sent_at = 0;
  std::string service_path;
  int trial = 1;
  bool forced = false;

  // device:sent_at:service_path with device and path percent-encoded.
  std::string base_key() const;

  // Same structural part with the trial bumped by one.
  ClientRequestId next_trial() const;

  friend bool operator==(const ClientRequestId&, const ClientRequestId&) = default;
};

// Throws RsamError(kEmptyDeviceId | kInvalidTrial).
ClientRequestId generate_client_id(std::string device_id, EpochMs now,
                                   std::string service_path, int trial,
                                   bool forced);

// Wire form: base_key ":" trial ":" forced01.
std::string encode_id(const ClientRequestId& id);

// Throws RsamError(kMalformedId).
ClientRequestId parse_id(std::string_view raw);

// parse_id plus the clock-skew bound: sent_at must not be later than
// now + max_skew. Throws RsamError(kMalformedId | kClockSkew).
ClientRequestId validate_id(std::string_view raw, EpochMs now,
                            std::chrono::milliseconds max_skew = kDefaultMaxSkew);

}  // namespace rsam::core
