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

#include "rsam/gateway/allow_list.h"

#include <fstream>
#include <sstream>

#include "rsam/core/error.h"

namespace rsam::gateway {

bool AllowRule::matches(core::HttpMethod m, std::string_view path) const {
  if (m != method) return false;
  if (prefix) return path.substr(0, pattern.size()) == pattern;
  return path == pattern;
}

AllowList::AllowList(std::vector<AllowRule> rules) : rules_(std::move(rules)) {}

AllowList AllowList::parse(std::istream& in) {
  std::vector<AllowRule> rules;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream words(line);
    std::string method_text;
    if (!(words >> method_text) || method_text.front() == '#') continue;

    auto bad = [&](const std::string& why) {
      throw RsamError(ErrorCode::kInvalidConfig,
                      "allow-list line " + std::to_string(number) + ": " + why);
    };
    auto method = core::parse_method(method_text);
    if (!method) bad("unknown method '" + method_text + "'");

    AllowRule rule;
    rule.method = *method;
    if (!(words >> rule.pattern) || rule.pattern.front() != '/') {
      bad("path pattern must start with '/'");
    }
    if (rule.pattern.back() == '*') {
      rule.prefix = true;
      rule.pattern.pop_back();
    }
    std::string flag;
    while (words >> flag) {
      if (flag == "forced") {
        rule.forced = true;
      } else if (flag == "idempotent") {
        rule.idempotent = true;
      } else if (flag == "non-idempotent") {
        rule.idempotent = false;
      } else {
        bad("unknown flag '" + flag + "'");
      }
    }
    if ((rule.method == core::HttpMethod::kGet || rule.method == core::HttpMethod::kHead) &&
        rule.idempotent == false) {
      bad("safe methods cannot be non-idempotent");
    }
    rules.push_back(std::move(rule));
  }
  if (rules.empty()) {
    throw RsamError(ErrorCode::kInvalidConfig, "allow-list has no entries");
  }
  return AllowList(std::move(rules));
}

AllowList AllowList::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw RsamError(ErrorCode::kInvalidConfig,
                    "cannot read allow-list " + file.string());
  }
  return parse(in);
}

const AllowRule* AllowList::match(core::HttpMethod method, std::string_view path) const {
  for (const auto& rule : rules_) {
    if (rule.matches(method, path)) return &rule;
  }
  return nullptr;
}

}  // namespace rsam::gateway
