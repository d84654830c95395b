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

#include "rsam/gateway/server.h"

#include <gtest/gtest.h>
#include <httplib.h>

#include <json.hpp>
#include <sstream>

#include "rsam/core/percent.h"
#include "rsam/gateway/api_json.h"
#include "support/temp_dir.h"

namespace rsam::gateway {
namespace {

using nlohmann::json;
using testing::TempDir;

// Real HTTP upstream, gateway and client on loopback.
class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    cloud_.Post("/feeds/posts", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      seen_base_key_ = req.get_header_value("X-RSAM-Base-Key");
      seen_query_ = req.get_param_value("q");
      res.status = cloud_status_;
      res.set_content("echo:" + req.body, "text/plain");
    });
    cloud_port_ = cloud_.bind_to_any_port("127.0.0.1");
    cloud_thread_ = std::thread([this] { cloud_.listen_after_bind(); });
    cloud_.wait_until_ready();

    GatewayConfig config;
    config.store_dir = dir_.path();
    std::istringstream rules("POST /feeds/posts\n");
    config.allow_list = AllowList::parse(rules);
    config.upstream_timeout = std::chrono::milliseconds(2000);
    auto upstream = std::make_shared<HttpUpstream>("http://127.0.0.1:" +
                                                   std::to_string(cloud_port_));
    gateway_ = std::make_unique<Gateway>(std::move(config), upstream);
    server_ = std::make_unique<GatewayServer>(*gateway_, ServerOptions{});
    client_ = std::make_unique<httplib::Client>("127.0.0.1", server_->start());
  }

  void TearDown() override {
    server_->stop();
    cloud_.stop();
    cloud_thread_.join();
  }

  httplib::Result post(const core::ClientRequestId& id, const std::string& body,
                       const std::string& query = "") {
    httplib::Headers h{{"X-RSAM-Client-Id", core::encode_id(id)}};
    return client_->Post("/proxy" + id.service_path + query, h, body, "text/plain");
  }

  core::ClientRequestId id(const std::string& device) {
    auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
                   .count();
    return core::generate_client_id(device, now, "/feeds/posts", 1, false);
  }

  TempDir dir_;
  httplib::Server cloud_;
  std::thread cloud_thread_;
  int cloud_port_ = 0;
  std::atomic<int> hits_{0};
  std::atomic<int> cloud_status_{200};
  std::string seen_base_key_;
  std::string seen_query_;
  std::unique_ptr<Gateway> gateway_;
  std::unique_ptr<GatewayServer> server_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServerTest, ProxyRoundTrip) {
  auto cid = id("devA");
  auto first = post(cid, "hello", "?q=1");
  ASSERT_TRUE(first);
  EXPECT_EQ(first->status, 200);
  EXPECT_EQ(first->body, "echo:hello");
  EXPECT_EQ(first->get_header_value("X-RSAM-State"), "SUCCEEDED");
  EXPECT_EQ(seen_base_key_, cid.base_key());
  EXPECT_EQ(seen_query_, "1");

  auto second = post(cid.next_trial(), "hello", "?q=1");
  ASSERT_TRUE(second);
  EXPECT_EQ(second->get_header_value("X-RSAM-State"), "CACHED");
  EXPECT_EQ(second->body, "echo:hello");
  EXPECT_EQ(hits_.load(), 1);
}

TEST_F(ServerTest, ListingHasExactFields) {
  post(id("devA"), "a");
  post(id("devB"), "b");
  auto res = client_->Get("/rsam/requests?device_id=devA");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  auto body = json::parse(res->body);
  ASSERT_TRUE(body.is_array());
  ASSERT_EQ(body.size(), 1u);
  std::set<std::string> keys;
  for (const auto& [k, _] : body[0].items()) keys.insert(k);
  EXPECT_EQ(keys, (std::set<std::string>{"base_key", "device_id", "method",
                                         "target_path", "state", "trial_count",
                                         "created_at", "forwarded_at", "completed_at",
                                         "latest_outcome"}));
  EXPECT_EQ(body[0]["state"], "SUCCEEDED");
  EXPECT_EQ(body[0]["latest_outcome"], "SUCCESS");

  auto parsed = summaries_from_json(res->body);
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].device_id, "devA");

  auto none = client_->Get("/rsam/requests?state=FAILED");
  EXPECT_EQ(json::parse(none->body), json::array());
}

TEST_F(ServerTest, RetryAndDeleteRoutes) {
  cloud_status_ = 503;
  auto cid = id("devA");
  auto failed = post(cid, "x");
  EXPECT_EQ(failed->get_header_value("X-RSAM-State"), "FAILED");

  const std::string key_path = "/rsam/requests/" + core::percent_encode(cid.base_key());
  cloud_status_ = 200;
  auto retried = client_->Post(key_path + "/retry");
  ASSERT_TRUE(retried);
  EXPECT_EQ(retried->status, 200);
  auto outcome = json::parse(retried->body);
  EXPECT_EQ(outcome["state"], "SUCCEEDED");
  EXPECT_EQ(outcome["base_key"], cid.base_key());
  EXPECT_EQ(outcome["status_code"], 200);

  auto again = client_->Post(key_path + "/retry");
  EXPECT_EQ(again->status, 409);
  EXPECT_EQ(json::parse(again->body)["error"], "NotRetryable");

  auto deleted = client_->Delete(key_path);
  EXPECT_EQ(deleted->status, 200);
  EXPECT_EQ(json::parse(deleted->body),
            (json{{"base_key", cid.base_key()}, {"state", "DELETED"}}));

  EXPECT_EQ(client_->Delete(key_path)->status, 404);
  EXPECT_EQ(client_->Post("/rsam/requests/nope/retry")->status, 404);
}

TEST_F(ServerTest, RejectsUnlistedRoute) {
  auto cid = id("devA");
  httplib::Headers h{{"X-RSAM-Client-Id", core::encode_id(cid)}};
  auto res = client_->Get("/proxy/admin", h);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 403);
  EXPECT_EQ(res->get_header_value("X-RSAM-State"), "FAILED");
  EXPECT_EQ(hits_.load(), 0);
}

}  // namespace
}  // namespace rsam::gateway
