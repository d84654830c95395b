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

#include "rsam/client/registry.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rsam/core/error.h"
#include "rsam/core/percent.h"
#include "rsam/core/wire.h"

namespace rsam::client {
namespace {

using nlohmann::json;

bool fits(core::ParamType type, const std::string& value) {
  switch (type) {
    case core::ParamType::kString:
      return true;
    case core::ParamType::kInteger: {
      long long v = 0;
      auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      return ec == std::errc() && end == value.data() + value.size() && !value.empty();
    }
    case core::ParamType::kNumber: {
      double v = 0;
      auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      return ec == std::errc() && end == value.data() + value.size() && !value.empty();
    }
    case core::ParamType::kBoolean:
      return value == "true" || value == "false";
  }
  return false;
}

[[noreturn]] void bad_config(const std::string& what) {
  throw RsamError(ErrorCode::kInvalidConfig, "registry: " + what);
}

}  // namespace

ServiceRegistry::ServiceRegistry(std::string middleware_url, std::string cloud_url)
    : middleware_url_(std::move(middleware_url)), cloud_url_(std::move(cloud_url)) {
  core::split_base_url(middleware_url_);
  core::split_base_url(cloud_url_);
}

void ServiceRegistry::add(core::ServiceDescriptor descriptor) {
  core::check_descriptor(descriptor);
  std::string name = descriptor.name;
  descriptors_.insert_or_assign(std::move(name), std::move(descriptor));
}

const core::ServiceDescriptor& ServiceRegistry::get(std::string_view name) const {
  auto it = descriptors_.find(name);
  if (it == descriptors_.end()) {
    throw RsamError(ErrorCode::kUnknownService,
                    "unknown service '" + std::string(name) + "'");
  }
  return it->second;
}

bool ServiceRegistry::contains(std::string_view name) const {
  return descriptors_.find(name) != descriptors_.end();
}

ServiceRegistry ServiceRegistry::parse(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    bad_config(e.what());
  }
  try {
    ServiceRegistry reg(doc.at("middleware_url").get<std::string>(),
                        doc.at("cloud_url").get<std::string>());
    for (const auto& s : doc.value("services", json::array())) {
      auto method = core::parse_method(s.at("method").get<std::string>());
      if (!method) bad_config("bad method in service " + s.dump());
      std::vector<core::ParamSpec> params;
      for (const auto& p : s.value("params", json::array())) {
        auto type = core::parse_param_type(p.value("type", "string"));
        if (!type) bad_config("bad param type in " + p.dump());
        params.push_back({p.at("name").get<std::string>(), *type});
      }
      auto d = core::make_descriptor(s.at("name").get<std::string>(), *method,
                                     s.at("path").get<std::string>(), std::move(params));
      if (s.contains("response")) {
        auto kind = core::parse_response_kind(s["response"].get<std::string>());
        if (!kind) bad_config("bad response kind in " + s.dump());
        d.response_kind = *kind;
      }
      d.base_url = s.value("base_url", "");
      d.forced = s.value("forced", false);
      d.direct = s.value("direct", false);
      d.idempotent = s.value("idempotent", d.idempotent);
      reg.add(std::move(d));
    }
    return reg;
  } catch (const json::exception& e) {
    bad_config(e.what());
  } catch (const RsamError& e) {
    if (e.code() == ErrorCode::kInvalidConfig) throw;
    bad_config(e.what());
  }
}

ServiceRegistry ServiceRegistry::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) bad_config("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string render_target(const core::ServiceDescriptor& descriptor, const Params& params) {
  auto invalid = [&](const std::string& what) {
    return RsamError(ErrorCode::kInvalidParams, descriptor.name + ": " + what);
  };
  for (const auto& [name, value] : params) {
    if (descriptor.param_spec.empty()) break;
    auto spec = std::find_if(descriptor.param_spec.begin(), descriptor.param_spec.end(),
                             [&](const core::ParamSpec& p) { return p.name == name; });
    if (spec == descriptor.param_spec.end()) throw invalid("undeclared param '" + name + "'");
    if (!fits(spec->type, value)) {
      throw invalid("param '" + name + "' is not " + std::string(core::to_string(spec->type)));
    }
  }

  std::string path;
  std::vector<std::string> used;
  const std::string& tpl = descriptor.path_template;
  for (std::size_t i = 0; i < tpl.size();) {
    if (tpl[i] != '{') {
      path += tpl[i++];
      continue;
    }
    std::size_t close = tpl.find('}', i);
    if (close == std::string::npos) throw invalid("unterminated placeholder");
    std::string name = tpl.substr(i + 1, close - i - 1);
    auto it = params.find(name);
    if (it == params.end()) throw invalid("missing param '" + name + "'");
    path += core::percent_encode(it->second);
    used.push_back(name);
    i = close + 1;
  }

  std::string query;
  for (const auto& [name, value] : params) {
    if (std::find(used.begin(), used.end(), name) != used.end()) continue;
    query += query.empty() ? '?' : '&';
    query += core::percent_encode(name) + "=" + core::percent_encode(value);
  }
  return path + query;
}

}  // namespace rsam::client
