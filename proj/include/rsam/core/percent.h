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

// Percent-encodes every byte outside the RFC 3986 unreserved set, using
// upper-case hex. The output never contains ':' or '/'.
std::string percent_encode(std::string_view raw);

// Inverse of percent_encode. Accepts either hex case; returns nullopt on a
// truncated or non-hex escape.
std::optional<std::string> percent_decode(std::string_view encoded);

}  // namespace rsam::core
