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

#include <gtest/gtest.h>

#include "rsam/core/error.h"

namespace rsam::client {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const RsamError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected RsamError";
  return ErrorCode::kIo;
}

TEST(RegistryTest, LookupAndUnknown) {
  ServiceRegistry reg("http://127.0.0.1:1", "http://127.0.0.1:2/api");
  reg.add(core::make_descriptor("post", core::HttpMethod::kPost, "/feeds/posts"));
  EXPECT_TRUE(reg.contains("post"));
  EXPECT_EQ(reg.get("post").path_template, "/feeds/posts");
  EXPECT_EQ(code_of([&] { reg.get("nope"); }), ErrorCode::kUnknownService);
  EXPECT_EQ(code_of([] { ServiceRegistry("", "http://x"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { ServiceRegistry("ftp://x", "http://x"); }), ErrorCode::kInvalidConfig);
}

TEST(RegistryTest, ParsesJson) {
  auto reg = ServiceRegistry::parse(R"({
    "middleware_url": "http://127.0.0.1:8080",
    "cloud_url": "http://127.0.0.1:9090",
    "services": [
      {"name": "login", "method": "POST", "path": "/auth/login", "forced": true},
      {"name": "feed", "method": "GET", "path": "/feeds/{user}",
       "params": [{"name": "user", "type": "string"}, {"name": "n", "type": "integer"}],
       "response": "json"},
      {"name": "raw", "method": "GET", "path": "/raw", "direct": true, "response": "binary"}
    ]})");
  EXPECT_EQ(reg.services().size(), 3u);
  EXPECT_TRUE(reg.get("login").forced);
  EXPECT_FALSE(reg.get("login").idempotent);
  EXPECT_TRUE(reg.get("raw").direct);
  EXPECT_EQ(reg.get("raw").response_kind, core::ResponseKind::kBinary);
  EXPECT_EQ(reg.get("feed").param_spec.size(), 2u);

  EXPECT_EQ(code_of([] { ServiceRegistry::parse("{"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] {
              ServiceRegistry::parse(R"({"middleware_url":"http://a","cloud_url":"http://b",
                "services":[{"name":"x","method":"GET","path":"/x","idempotent":false}]})");
            }),
            ErrorCode::kInvalidConfig);
}

TEST(RenderTargetTest, FillsPlaceholdersAndQuery) {
  auto d = core::make_descriptor("feed", core::HttpMethod::kGet, "/feeds/{user}",
                                 {{"user", core::ParamType::kString},
                                  {"n", core::ParamType::kInteger},
                                  {"all", core::ParamType::kBoolean}});
  EXPECT_EQ(render_target(d, {{"user", "a b"}, {"n", "10"}, {"all", "true"}}),
            "/feeds/a%20b?all=true&n=10");
  EXPECT_EQ(render_target(d, {{"user", "x"}}), "/feeds/x");
  EXPECT_EQ(code_of([&] { render_target(d, {}); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([&] { render_target(d, {{"user", "x"}, {"n", "ten"}}); }),
            ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([&] { render_target(d, {{"user", "x"}, {"zzz", "1"}}); }),
            ErrorCode::kInvalidParams);

  auto free_form = core::make_descriptor("any", core::HttpMethod::kGet, "/any");
  EXPECT_EQ(render_target(free_form, {{"q", "1"}}), "/any?q=1");
}

}  // namespace
}  // namespace rsam::client
