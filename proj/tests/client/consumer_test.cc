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

#include "rsam/client/consumer.h"

#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <sstream>
#include <thread>

#include "rsam/core/error.h"
#include "rsam/gateway/server.h"
#include "support/temp_dir.h"

namespace rsam::client {
namespace {

using core::OutcomeState;
using testing::TempDir;
using namespace std::chrono_literals;

TEST(AdaptResponseTest, MapsStatesAndKeepsBytes) {
  RawResponse cached{200, std::string("\0body", 5), {{"X-RSAM-State", "CACHED"}}};
  auto c = adapt_response(cached, true, "k");
  EXPECT_EQ(c.state, OutcomeState::kCached);
  EXPECT_EQ(c.payload, cached.body);

  auto direct = adapt_response({404, "nf", {}}, false, "k");
  EXPECT_EQ(direct.state, OutcomeState::kFailed);
  EXPECT_EQ(direct.payload, "nf");
  EXPECT_EQ(adapt_response({204, "", {}}, false, "k").state, OutcomeState::kSucceeded);

  auto doubt = adapt_response({409, "", {{"x-rsam-state", "DOUBT"}}}, true, "k");
  EXPECT_EQ(doubt.state, OutcomeState::kDoubt);
  EXPECT_TRUE(doubt.payload.empty());

  try {
    adapt_response({200, "x", {}}, true, "k");
    FAIL();
  } catch (const RsamError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingStateHeader);
  }
}

// Cloud service + gateway + consumer on loopback.
class ConsumerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      {
        std::lock_guard lock(mu_);
        last_headers_ = req.headers;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(latency_ms_.load()));
      res.status = status_;
      res.set_content("echo:" + req.body, "text/plain");
    };
    cloud_.Post("/feeds/posts", handler);
    cloud_.Post("/auth/login", handler);
    cloud_.Get("/raw", handler);
    cloud_port_ = cloud_.bind_to_any_port("127.0.0.1");
    cloud_thread_ = std::thread([this] { cloud_.listen_after_bind(); });
    cloud_.wait_until_ready();
    start_gateway();
    consumer_ = make_consumer();
  }

  void TearDown() override {
    stop_gateway();
    cloud_.stop();
    cloud_thread_.join();
  }

  std::string cloud_url() const { return "http://127.0.0.1:" + std::to_string(cloud_port_); }

  void start_gateway() {
    gateway::GatewayConfig config;
    config.store_dir = gateway_dir_.path();
    std::istringstream rules("POST /feeds/posts\nPOST /auth/login forced\n");
    config.allow_list = gateway::AllowList::parse(rules);
    gateway_ = std::make_unique<gateway::Gateway>(
        std::move(config), std::make_shared<gateway::HttpUpstream>(cloud_url()));
    gateway::ServerOptions opts;
    opts.port = gateway_port_;
    server_ = std::make_unique<gateway::GatewayServer>(*gateway_, opts);
    gateway_port_ = server_->start();
  }

  void stop_gateway() {
    if (server_) server_->stop();
    server_.reset();
    gateway_.reset();
  }

  std::unique_ptr<Consumer> make_consumer(std::chrono::milliseconds timeout = 5s) {
    ServiceRegistry reg("http://127.0.0.1:" + std::to_string(gateway_port_), cloud_url());
    reg.add(core::make_descriptor("post", core::HttpMethod::kPost, "/feeds/posts"));
    auto login = core::make_descriptor("login", core::HttpMethod::kPost, "/auth/login");
    login.forced = true;
    reg.add(login);
    auto raw = core::make_descriptor("raw", core::HttpMethod::kGet, "/raw");
    raw.direct = true;
    reg.add(raw);
    ConsumerConfig cfg;
    cfg.device_id = "devA";
    cfg.state_dir = client_dir_.path();
    cfg.timeout = timeout;
    cfg.max_body = 1 << 20;
    return std::make_unique<Consumer>(std::move(reg), cfg);
  }

  void wait_until_settled(const std::string& base_key) {
    for (int i = 0; i < 200; ++i) {
      auto rec = gateway_->store().find(base_key);
      if (rec && rec->lifecycle != core::Lifecycle::kForwarded &&
          rec->lifecycle != core::Lifecycle::kReceived) {
        return;
      }
      std::this_thread::sleep_for(25ms);
    }
    FAIL() << "gateway never settled " << base_key;
  }

  httplib::Headers last_headers() {
    std::lock_guard lock(mu_);
    return last_headers_;
  }

  TempDir gateway_dir_;
  TempDir client_dir_;
  httplib::Server cloud_;
  std::thread cloud_thread_;
  int cloud_port_ = 0;
  int gateway_port_ = 0;
  std::atomic<int> hits_{0};
  std::atomic<int> status_{200};
  std::atomic<int> latency_ms_{0};
  std::mutex mu_;
  httplib::Headers last_headers_;
  std::unique_ptr<gateway::Gateway> gateway_;
  std::unique_ptr<gateway::GatewayServer> server_;
  std::unique_ptr<Consumer> consumer_;
};

TEST_F(ConsumerTest, AllReachableSucceeds) {
  auto r = consumer_->consume("post", {}, "hello");
  ASSERT_FALSE(r.queued());
  EXPECT_EQ(r.outcome->state, OutcomeState::kSucceeded);
  EXPECT_EQ(r.outcome->payload, "echo:hello");
  EXPECT_EQ(r.outcome->base_key, r.request.id.base_key());
  EXPECT_EQ(r.request.id.trial, 1);
  auto logged = consumer_->local().last_outcome(r.request.id.base_key());
  ASSERT_TRUE(logged);
  EXPECT_EQ(logged->outcome, *r.outcome);
}

TEST_F(ConsumerTest, OfflineQueuesWithoutSending) {
  auto r = consumer_->consume("post", {}, "x", [] { return false; });
  EXPECT_TRUE(r.queued());
  EXPECT_EQ(hits_.load(), 0);
  EXPECT_EQ(consumer_->local().queue().size(), 1u);
  EXPECT_TRUE(gateway_->list_requests().empty());
}

TEST_F(ConsumerTest, MiddlewareErrorQueues) {
  gateway_->set_fail_before_proxy(true);
  auto r = consumer_->consume("post", {}, "x");
  EXPECT_TRUE(r.queued());
  EXPECT_NE(r.queued_reason.find("middleware error"), std::string::npos);
  EXPECT_EQ(hits_.load(), 0);
}

TEST_F(ConsumerTest, MiddlewareDownQueuesThenFlushes) {
  stop_gateway();
  auto a = consumer_->consume("post", {}, "a");
  auto b = consumer_->consume("post", {}, "b");
  auto c = consumer_->consume("post", {}, "c");
  EXPECT_TRUE(a.queued() && b.queued() && c.queued());
  EXPECT_EQ(consumer_->local().queue().size(), 3u);

  // Stop on the first failure: the head stays queued, the rest untouched.
  auto stuck = consumer_->flush_queue();
  ASSERT_EQ(stuck.size(), 1u);
  EXPECT_TRUE(stuck[0].queued());
  auto q = consumer_->local().queue();
  ASSERT_EQ(q.size(), 3u);
  EXPECT_EQ(q[0].request.id.base_key(), a.request.id.base_key());
  EXPECT_EQ(q[0].request.id.trial, 2);
  EXPECT_EQ(q[1].request.id.trial, 1);

  start_gateway();
  auto flushed = consumer_->flush_queue();
  ASSERT_EQ(flushed.size(), 3u);
  for (const auto& f : flushed) {
    ASSERT_FALSE(f.queued());
    EXPECT_EQ(f.outcome->state, OutcomeState::kSucceeded);
  }
  EXPECT_EQ(flushed[0].request.id.base_key(), a.request.id.base_key());
  EXPECT_EQ(flushed[0].outcome->payload, "echo:a");
  EXPECT_EQ(flushed[2].outcome->payload, "echo:c");
  EXPECT_TRUE(consumer_->local().queue().empty());
  EXPECT_EQ(hits_.load(), 3);
}

TEST_F(ConsumerTest, QueueSurvivesClientRestart) {
  auto r = consumer_->consume("post", {}, "x", [] { return false; });
  consumer_ = make_consumer();
  auto flushed = consumer_->flush_queue();
  ASSERT_EQ(flushed.size(), 1u);
  EXPECT_EQ(flushed[0].request.id.base_key(), r.request.id.base_key());
  EXPECT_EQ(flushed[0].outcome->state, OutcomeState::kSucceeded);
}

TEST_F(ConsumerTest, FlushDoesNotDuplicateAlreadyExecutedPost) {
  consumer_ = make_consumer(300ms);
  latency_ms_ = 800;
  auto first = consumer_->consume("post", {}, "once");
  ASSERT_TRUE(first.queued());
  wait_until_settled(first.request.id.base_key());
  latency_ms_ = 0;
  auto flushed = consumer_->flush_queue();
  ASSERT_EQ(flushed.size(), 1u);
  EXPECT_EQ(flushed[0].outcome->state, OutcomeState::kCached);
  EXPECT_EQ(flushed[0].outcome->payload, "echo:once");
  EXPECT_EQ(hits_.load(), 1);
}

TEST_F(ConsumerTest, TimeoutThenRetryIsCached) {
  consumer_ = make_consumer(300ms);
  latency_ms_ = 900;
  auto first = consumer_->consume("post", {}, "slow");
  ASSERT_TRUE(first.queued());
  wait_until_settled(first.request.id.base_key());
  auto again = consumer_->retry(first);
  ASSERT_FALSE(again.queued());
  EXPECT_EQ(again.outcome->state, OutcomeState::kCached);
  EXPECT_EQ(again.outcome->payload, "echo:slow");
  EXPECT_EQ(again.request.id.base_key(), first.request.id.base_key());
  EXPECT_EQ(again.request.id.trial, 2);
  EXPECT_EQ(hits_.load(), 1);
  EXPECT_TRUE(consumer_->local().queue().empty());
}

TEST_F(ConsumerTest, RetryAfterFailureSucceeds) {
  status_ = 500;
  auto first = consumer_->consume("post", {}, "x");
  ASSERT_FALSE(first.queued());
  EXPECT_EQ(first.outcome->state, OutcomeState::kFailed);
  status_ = 200;
  auto second = consumer_->retry(first);
  EXPECT_EQ(second.outcome->state, OutcomeState::kSucceeded);
  EXPECT_EQ(second.request.id.base_key(), first.request.id.base_key());
  EXPECT_EQ(hits_.load(), 2);
}

TEST_F(ConsumerTest, ForcedServiceNeverCached) {
  auto first = consumer_->consume("login", {}, "pw");
  auto second = consumer_->retry(first);
  EXPECT_EQ(first.outcome->state, OutcomeState::kSucceeded);
  EXPECT_EQ(second.outcome->state, OutcomeState::kSucceeded);
  EXPECT_EQ(hits_.load(), 2);
}

TEST_F(ConsumerTest, DirectRouteCarriesNoProtocolHeaders) {
  auto r = consumer_->consume("raw", {}, "");
  ASSERT_FALSE(r.queued());
  EXPECT_EQ(r.outcome->state, OutcomeState::kSucceeded);
  for (const auto& [k, v] : last_headers()) {
    EXPECT_NE(k.rfind("X-RSAM-", 0), 0u) << k;
  }
  EXPECT_TRUE(gateway_->list_requests().empty());

  auto offline = consumer_->consume("raw", {}, "", [] { return false; });
  ASSERT_FALSE(offline.queued());
  EXPECT_EQ(offline.outcome->state, OutcomeState::kFailed);
  EXPECT_TRUE(consumer_->local().queue().empty());
}

TEST_F(ConsumerTest, Errors) {
  try {
    consumer_->consume("nope", {}, "");
    FAIL();
  } catch (const RsamError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownService);
  }
  try {
    consumer_->consume("post", {}, std::string((1 << 20) + 1, 'x'));
    FAIL();
  } catch (const RsamError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPayloadTooLarge);
  }
}

TEST_F(ConsumerTest, IdsAreDistinctWithinOneMillisecond) {
  ConsumerConfig cfg;
  cfg.device_id = "devA";
  cfg.state_dir = client_dir_.path();
  cfg.clock = [] { return core::EpochMs{5}; };
  Consumer frozen(consumer_->registry(), cfg);
  auto a = frozen.prepare("post", {}, "");
  auto b = frozen.prepare("post", {}, "");
  EXPECT_NE(a.id.base_key(), b.id.base_key());
}

}  // namespace
}  // namespace rsam::client
