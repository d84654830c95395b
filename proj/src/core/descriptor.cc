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

#include "rsam/core/descriptor.h"

#include <array>
#include <set>

#include "rsam/core/error.h"

namespace rsam::core {
namespace {

constexpr std::array<std::pair<HttpMethod, std::string_view>, 7> kMethods{{
    {HttpMethod::kGet, "GET"},
    {HttpMethod::kPost, "POST"},
    {HttpMethod::kPut, "PUT"},
    {HttpMethod::kPatch, "PATCH"},
    {HttpMethod::kDelete, "DELETE"},
    {HttpMethod::kHead, "HEAD"},
    {HttpMethod::kOptions, "OPTIONS"},
}};

constexpr std::array<std::pair<ParamType, std::string_view>, 4> kParamTypes{{
    {ParamType::kString, "string"},
    {ParamType::kInteger, "integer"},
    {ParamType::kNumber, "number"},
    {ParamType::kBoolean, "boolean"},
}};

constexpr std::array<std::pair<ResponseKind, std::string_view>, 3> kKinds{{
    {ResponseKind::kJson, "json"},
    {ResponseKind::kText, "text"},
    {ResponseKind::kBinary, "binary"},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N>& table,
                         Enum value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
std::optional<Enum> value_of(
    const std::array<std::pair<Enum, std::string_view>, N>& table,
    std::string_view text) {
  for (const auto& [e, name] : table) {
    if (name == text) return e;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(HttpMethod method) { return name_of(kMethods, method); }

std::optional<HttpMethod> parse_method(std::string_view text) {
  return value_of(kMethods, text);
}

bool idempotent_by_default(HttpMethod method) {
  switch (method) {
    case HttpMethod::kPost:
    case HttpMethod::kPatch:
      return false;
    default:
      return true;
  }
}

std::string_view to_string(ParamType type) { return name_of(kParamTypes, type); }

std::optional<ParamType> parse_param_type(std::string_view text) {
  return value_of(kParamTypes, text);
}

std::string_view to_string(ResponseKind kind) { return name_of(kKinds, kind); }

std::optional<ResponseKind> parse_response_kind(std::string_view text) {
  return value_of(kKinds, text);
}

ServiceDescriptor make_descriptor(std::string name, HttpMethod method,
                                  std::string path_template,
                                  std::vector<ParamSpec> params) {
  ServiceDescriptor d;
  d.name = std::move(name);
  d.method = method;
  d.path_template = std::move(path_template);
  d.param_spec = std::move(params);
  d.idempotent = idempotent_by_default(method);
  return d;
}

void check_descriptor(const ServiceDescriptor& d) {
  auto fail = [&](const std::string& why) {
    throw RsamError(ErrorCode::kInvalidDescriptor,
                    "service '" + d.name + "': " + why);
  };
  if (d.name.empty()) fail("name must be non-empty");
  if (d.path_template.empty() || d.path_template.front() != '/') {
    fail("path template must start with '/'");
  }
  if ((d.method == HttpMethod::kGet || d.method == HttpMethod::kHead) &&
      !d.idempotent) {
    fail("safe methods are always idempotent");
  }
  std::set<std::string> seen;
  for (const auto& p : d.param_spec) {
    if (p.name.empty()) fail("parameter names must be non-empty");
    if (!seen.insert(p.name).second) fail("duplicate parameter '" + p.name + "'");
  }
}

}  // namespace rsam::core
