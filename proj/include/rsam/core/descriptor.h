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

enum class HttpMethod { kGet, kPost, kPut, kPatch, kDelete, kHead, kOptions };

std::string_view to_string(HttpMethod method);
std::optional<HttpMethod> parse_method(std::string_view text);

// Default idempotency class of a method: safe methods plus PUT and DELETE.
bool idempotent_by_default(HttpMethod method);

enum class ParamType { kString, kInteger, kNumber, kBoolean };

std::string_view to_string(ParamType type);
std::optional<ParamType> parse_param_type(std::string_view text);

enum class ResponseKind { kJson, kText, kBinary };

std::string_view to_string(ResponseKind kind);
std::optional<ResponseKind> parse_response_kind(std::string_view text);

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::kString;

  friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

// Per-service routing and semantics as the client sees them.
//
// `forced` disables serving cached results; `direct` bypasses the gateway.
// All four combinations are legal. `idempotent` must be true for GET.
struct ServiceDescriptor {
  std::string name;
  HttpMethod method = HttpMethod::kGet;
  std::string base_url;  // empty: use the registry's cloud url
  std::string path_template;
  std::vector<ParamSpec> param_spec;
  ResponseKind response_kind = ResponseKind::kJson;
  bool forced = false;
  bool direct = false;
  bool idempotent = true;

  friend bool operator==(const ServiceDescriptor&, const ServiceDescriptor&) = default;
};

// Builds a descriptor with `idempotent` defaulted from the method.
ServiceDescriptor make_descriptor(std::string name, HttpMethod method,
                                  std::string path_template,
                                  std::vector<ParamSpec> params = {});

// Throws RsamError(kInvalidDescriptor) when a field combination is illegal.
void check_descriptor(const ServiceDescriptor& descriptor);

}  // namespace rsam::core
