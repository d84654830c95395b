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

#include "rsam/core/client_id.h"

#include <array>
#include <charconv>
#include <limits>

#include "rsam/core/error.h"
#include "rsam/core/percent.h"

namespace rsam::core {
namespace {

constexpr std::size_t kWireFields = 5;

[[noreturn]] void malformed(std::string_view raw, std::string_view why) {
  throw RsamError(ErrorCode::kMalformedId,
                  "malformed client id '" + std::string(raw) + "': " +
                      std::string(why));
}

template <typename Int>
bool parse_digits(std::string_view text, Int& out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

std::string ClientRequestId::base_key() const {
  return percent_encode(device_id) + ":" + std::to_string(sent_at) + ":" +
         percent_encode(service_path);
}

ClientRequestId ClientRequestId::next_trial() const {
  ClientRequestId next = *this;
  ++next.trial;
  return next;
}

ClientRequestId generate_client_id(std::string device_id, EpochMs now,
                                   std::string service_path, int trial,
                                   bool forced) {
  if (device_id.empty()) {
    throw RsamError(ErrorCode::kEmptyDeviceId, "device id must be non-empty");
  }
  if (trial < 1) {
    throw RsamError(ErrorCode::kInvalidTrial,
                    "trial must be >= 1, got " + std::to_string(trial));
  }
  return ClientRequestId{std::move(device_id), now, std::move(service_path),
                         trial, forced};
}

std::string encode_id(const ClientRequestId& id) {
  return id.base_key() + ":" + std::to_string(id.trial) + ":" +
         (id.forced ? "1" : "0");
}

ClientRequestId parse_id(std::string_view raw) {
  std::array<std::string_view, kWireFields> fields;
  std::size_t count = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= raw.size(); ++i) {
    if (i == raw.size() || raw[i] == ':') {
      if (count == kWireFields) malformed(raw, "too many fields");
      fields[count++] = raw.substr(start, i - start);
      start = i + 1;
    }
  }
  if (count != kWireFields) malformed(raw, "expected 5 ':'-separated fields");

  ClientRequestId id;
  auto device = percent_decode(fields[0]);
  if (!device) malformed(raw, "bad percent-encoding in device id");
  if (device->empty()) malformed(raw, "empty device id");
  id.device_id = std::move(*device);

  if (!parse_digits(fields[1], id.sent_at)) {
    malformed(raw, "sent_at is not a non-negative integer");
  }

  auto path = percent_decode(fields[2]);
  if (!path) malformed(raw, "bad percent-encoding in service path");
  id.service_path = std::move(*path);

  if (!parse_digits(fields[3], id.trial) || id.trial < 1) {
    malformed(raw, "trial is not a positive integer");
  }

  if (fields[4] == "0") {
    id.forced = false;
  } else if (fields[4] == "1") {
    id.forced = true;
  } else {
    malformed(raw, "forced flag must be 0 or 1");
  }
  return id;
}

ClientRequestId validate_id(std::string_view raw, EpochMs now,
                            std::chrono::milliseconds max_skew) {
  ClientRequestId id = parse_id(raw);
  // Saturate so a huge skew cannot overflow.
  EpochMs limit = now > std::numeric_limits<EpochMs>::max() - max_skew.count()
                      ? std::numeric_limits<EpochMs>::max()
                      : now + max_skew.count();
  if (id.sent_at > limit) {
    throw RsamError(ErrorCode::kClockSkew,
                    "client id sent_at " + std::to_string(id.sent_at) +
                        " is more than " + std::to_string(max_skew.count()) +
                        " ms ahead of gateway clock " + std::to_string(now));
  }
  return id;
}

}  // namespace rsam::core
