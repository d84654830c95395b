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
#include <map>
#include <string>
#include <string_view>

#include "rsam/core/descriptor.h"

namespace rsam::client {

using Params = std::map<std::string, std::string>;

// Service descriptors plus the two routing roots.
class ServiceRegistry {
 public:
  // Throws RsamError(kInvalidConfig) unless both urls are http(s).
  ServiceRegistry(std::string middleware_url, std::string cloud_url);

  // Validates the descriptor; a second add() with the same name replaces it.
  void add(core::ServiceDescriptor descriptor);
  // Throws RsamError(kUnknownService).
  const core::ServiceDescriptor& get(std::string_view name) const;
  bool contains(std::string_view name) const;

  const std::string& middleware_url() const { return middleware_url_; }
  const std::string& cloud_url() const { return cloud_url_; }
  const std::map<std::string, core::ServiceDescriptor, std::less<>>& services() const {
    return descriptors_;
  }

  // JSON file: {"middleware_url", "cloud_url", "services": [{"name", "method",
  // "path", "params": [{"name", "type"}], "response", "forced", "direct",
  // "idempotent"}]}. Throws RsamError(kInvalidConfig).
  static ServiceRegistry load(const std::filesystem::path& file);
  static ServiceRegistry parse(std::string_view json_text);

 private:
  std::string middleware_url_;
  std::string cloud_url_;
  std::map<std::string, core::ServiceDescriptor, std::less<>> descriptors_;
};

// Fills {name} placeholders of the path template; the remaining params go to
// the query string in key order. Throws RsamError(kInvalidParams) for a
// missing placeholder value, an undeclared param (when the descriptor declares
// any) or a value that does not fit its declared type.
std::string render_target(const core::ServiceDescriptor& descriptor, const Params& params);

}  // namespace rsam::client
