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
#include <utility>
#include <vector>

namespace rsam::core {

// Headers that carry the protocol between client, gateway and upstream.
inline constexpr std::string_view kHeaderClientId = "X-RSAM-Client-Id";
inline constexpr std::string_view kHeaderForced = "X-RSAM-Forced";
inline constexpr std::string_view kHeaderState = "X-RSAM-State";
inline constexpr std::string_view kHeaderBaseKey = "X-RSAM-Base-Key";
inline constexpr std::string_view kHeaderMessage = "X-RSAM-Message";

inline constexpr std::string_view kProxyMount = "/proxy";
inline constexpr std::string_view kManagementRoot = "/rsam/requests";

using Headers = std::vector<std::pair<std::string, std::string>>;

bool iequals(std::string_view a, std::string_view b);

// First value for `name`, compared case-insensitively.
std::optional<std::string> find_header(const Headers& headers, std::string_view name);

// "http://host:port/prefix" split into the origin and the path prefix
// ("" when absent, never a trailing '/').
struct BaseUrl {
  std::string origin;
  std::string prefix;
};

// Throws RsamError(kInvalidConfig) when the url has no http(s) scheme.
BaseUrl split_base_url(std::string_view url);

}  // namespace rsam::core
