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

#include "rsam/gateway/api_json.h"

#include <json.hpp>

#include "rsam/core/error.h"

namespace rsam::gateway {
namespace {

using nlohmann::json;

json optional_ms(const std::optional<EpochMs>& value) {
  return value ? json(*value) : json(nullptr);
}

std::optional<EpochMs> read_optional_ms(const json& value) {
  if (value.is_null()) return std::nullopt;
  return value.get<EpochMs>();
}

}  // namespace

std::string summaries_to_json(const std::vector<RequestSummary>& summaries) {
  json out = json::array();
  for (const auto& s : summaries) {
    out.push_back({
        {"base_key", s.base_key},
        {"device_id", s.device_id},
        {"method", core::to_string(s.method)},
        {"target_path", s.target_path},
        {"state", s.state},
        {"trial_count", s.trial_count},
        {"created_at", s.created_at},
        {"forwarded_at", optional_ms(s.forwarded_at)},
        {"completed_at", optional_ms(s.completed_at)},
        {"latest_outcome",
         s.latest_outcome ? json(to_string(*s.latest_outcome)) : json(nullptr)},
    });
  }
  return out.dump();
}

std::vector<RequestSummary> summaries_from_json(const std::string& text) {
  std::vector<RequestSummary> out;
  try {
    for (const auto& item : json::parse(text)) {
      RequestSummary s;
      s.base_key = item.at("base_key").get<std::string>();
      s.device_id = item.at("device_id").get<std::string>();
      auto method = core::parse_method(item.at("method").get<std::string>());
      if (!method) throw RsamError(ErrorCode::kIo, "bad method in summary");
      s.method = *method;
      s.target_path = item.at("target_path").get<std::string>();
      s.state = item.at("state").get<std::string>();
      s.trial_count = item.at("trial_count").get<int>();
      s.created_at = item.at("created_at").get<EpochMs>();
      s.forwarded_at = read_optional_ms(item.at("forwarded_at"));
      s.completed_at = read_optional_ms(item.at("completed_at"));
      const auto& latest = item.at("latest_outcome");
      if (!latest.is_null()) {
        s.latest_outcome = latest.get<std::string>() == "SUCCESS"
                               ? ResponseOutcome::kSuccess
                               : ResponseOutcome::kFailure;
      }
      out.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw RsamError(ErrorCode::kIo, std::string("bad request listing: ") + e.what());
  }
  return out;
}

std::string outcome_to_json(const core::RsamOutcome& outcome) {
  return json{{"base_key", outcome.base_key},
              {"state", core::to_string(outcome.state)},
              {"status_code", outcome.status_code},
              {"message", outcome.message}}
      .dump();
}

std::string deleted_to_json(std::string_view base_key) {
  return json{{"base_key", base_key}, {"state", "DELETED"}}.dump();
}

std::string error_to_json(std::string_view code, std::string_view message) {
  return json{{"error", code}, {"message", message}}.dump();
}

}  // namespace rsam::gateway
