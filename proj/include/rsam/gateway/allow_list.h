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

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsam/core/descriptor.h"

namespace rsam::gateway {

// One allowed (method, path) pair.
//
// A pattern ending in '*' matches by prefix (the '*' itself is dropped);
// otherwise the path must match exactly. Optional per-rule semantics mirror
// the client descriptor: `forced` and an explicit idempotency class.
struct AllowRule {
  core::HttpMethod method = core::HttpMethod::kGet;
  std::string pattern;
  bool prefix = false;
  bool forced = false;
  std::optional<bool> idempotent;

  bool matches(core::HttpMethod m, std::string_view path) const;
  bool is_idempotent() const {
    return idempotent.value_or(core::idempotent_by_default(method));
  }
};

class AllowList {
 public:
  AllowList() = default;
  explicit AllowList(std::vector<AllowRule> rules);

  // Line format: `METHOD path-pattern [forced] [idempotent|non-idempotent]`.
  // Blank lines and lines starting with '#' are skipped.
  // Throws RsamError(kInvalidConfig) on a bad line or an empty list.
  static AllowList parse(std::istream& in);
  static AllowList load(const std::filesystem::path& file);

  // First matching rule; the query string must already be stripped.
  const AllowRule* match(core::HttpMethod method, std::string_view path) const;

  const std::vector<AllowRule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

 private:
  std::vector<AllowRule> rules_;
};

}  // namespace rsam::gateway
