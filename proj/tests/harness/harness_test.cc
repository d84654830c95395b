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

#include <gtest/gtest.h>
#include <httplib.h>

#include <set>

#include "rsam/core/error.h"
#include "rsam/harness/bench.h"
#include "rsam/harness/mock_upstream.h"
#include "rsam/harness/relay.h"
#include "rsam/harness/scenarios.h"
#include "support/temp_dir.h"

namespace rsam::harness {
namespace {

TEST(ParseSize, Suffixes) {
  EXPECT_EQ(parse_size("512"), 512u);
  EXPECT_EQ(parse_size("1k"), 1024u);
  EXPECT_EQ(parse_size("64K"), 65536u);
  EXPECT_EQ(parse_size("1m"), 1048576u);
  EXPECT_EQ(parse_size("4m"), 4u * 1024 * 1024);
}

TEST(ParseSize, Garbage) {
  for (const char* bad : {"", "k", "12x", "-1", "1.5m"}) {
    EXPECT_THROW(parse_size(bad), RsamError) << bad;
  }
}

TEST(FaultScript, JsonRoundTrip) {
  FaultScript s;
  s.reachable = false;
  s.crash_gateway_after_forward = true;
  s.routes["*"] = RouteFault{503, std::chrono::milliseconds(20), std::nullopt};
  s.routes["/bench/upload"] = RouteFault{200, std::chrono::milliseconds(0), 4096};
  EXPECT_EQ(fault_script_from_json(fault_script_to_json(s)), s);
}

TEST(FaultScript, RouteFallsBackToWildcard) {
  FaultScript s;
  s.routes["*"].status = 500;
  s.routes["/a"].status = 201;
  EXPECT_EQ(s.route("/a").status, 201);
  EXPECT_EQ(s.route("/b").status, 500);
  EXPECT_EQ(FaultScript{}.route("/x").status, 200);
}

TEST(FaultScript, RejectsBadJson) {
  EXPECT_THROW(fault_script_from_json("{"), RsamError);
  EXPECT_THROW(fault_script_from_json(R"({"routes": 3})"), RsamError);
}

TEST(GeneratedPayload, DeterministicAndCoversEveryByte) {
  const std::string& a = generated_payload(64 * 1024);
  EXPECT_EQ(a.size(), 64u * 1024);
  EXPECT_EQ(a, generated_payload(64 * 1024));
  std::set<unsigned char> seen(a.begin(), a.end());
  EXPECT_EQ(seen.size(), 256u);
}

TEST(MockUpstream, EchoesAndCountsByBaseKey) {
  MockUpstream mock;
  httplib::Client c(mock.url());
  auto r = c.Post("/feeds/posts", {{"X-RSAM-Base-Key", "k1"}}, "hello", "text/plain");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->body, "hello");
  c.Post("/feeds/posts", {{"X-RSAM-Base-Key", "k1"}}, "again", "text/plain");
  c.Get("/feeds/latest");
  EXPECT_EQ(mock.invocations("k1"), 2);
  EXPECT_EQ(mock.invocations(""), 1);
  EXPECT_EQ(mock.total_invocations(), 3);
  mock.reset_counters();
  EXPECT_EQ(mock.total_invocations(), 0);
}

TEST(MockUpstream, ScriptedStatusAndUnreachable) {
  MockUpstream mock;
  FaultScript s;
  s.routes["*"] = RouteFault{500, std::chrono::milliseconds(0), 10};
  mock.apply(s);
  httplib::Client c(mock.url());
  auto r = c.Get("/anything");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 500);
  EXPECT_EQ(r->body.size(), 10u);

  s.reachable = false;
  mock.apply(s);
  httplib::Client again(mock.url());
  again.set_connection_timeout(std::chrono::seconds(1));
  EXPECT_FALSE(again.Get("/anything"));
}

TEST(MockUpstream, ControlEndpoint) {
  MockUpstream mock;
  httplib::Client ctl(mock.control_url());
  FaultScript s;
  s.routes["/x"].status = 418;
  auto posted = ctl.Post("/__fault", fault_script_to_json(s), "application/json");
  ASSERT_TRUE(posted);
  EXPECT_EQ(posted->status, 200);
  EXPECT_EQ(mock.script(), s);
  auto bad = ctl.Post("/__fault", "nope", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
}

TEST(CountingRelay, CountsBytesPerConnection) {
  httplib::Server target;
  target.Post("/", [](const httplib::Request& req, httplib::Response& res) {
    res.set_content(std::string(req.body.size() * 2, 'r'), "text/plain");
  });
  int port = target.bind_to_any_port("127.0.0.1");
  std::thread t([&] { target.listen_after_bind(); });
  target.wait_until_ready();

  CountingRelay relay("127.0.0.1", port);
  {
    httplib::Client c(relay.url());
    c.set_keep_alive(false);
    auto r = c.Post("/", std::string(1000, 'q'), "text/plain");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->body.size(), 2000u);
  }
  auto conns = relay.connections();
  ASSERT_EQ(conns.size(), 1u);
  EXPECT_GT(conns[0].sent, 1000u);
  EXPECT_GT(conns[0].received, 2000u);

  relay.reset();
  EXPECT_TRUE(relay.connections().empty());

  relay.set_reachable(false);
  EXPECT_FALSE(relay.reachable());
  httplib::Client refused(relay.url());
  refused.set_connection_timeout(std::chrono::seconds(1));
  EXPECT_FALSE(refused.Get("/"));
  relay.set_reachable(true);
  httplib::Client back(relay.url());
  EXPECT_TRUE(back.Post("/", "x", "text/plain"));

  target.stop();
  t.join();
}

TEST(Scenarios, TableHasSixRows) {
  const auto& table = scenario_table();
  ASSERT_EQ(table.size(), 6u);
  for (std::size_t i = 0; i < table.size(); ++i) {
    EXPECT_EQ(table[i].row, static_cast<int>(i) + 1);
    EXPECT_FALSE(table[i].expected.empty());
  }
}

TEST(Scenarios, UnknownRowIsRejected) {
  testing::TempDir dir;
  EXPECT_THROW(run_scenario("7", dir.path()), RsamError);
  EXPECT_THROW(run_scenario("no-such-row", dir.path()), RsamError);
}

TEST(Scenarios, AllReachableRowPasses) {
  testing::TempDir dir;
  ScenarioReport r = run_scenario("1", dir.path());
  EXPECT_TRUE(r.passed()) << format_report(r);
  EXPECT_EQ(r.observed, r.expected);
}

}  // namespace
}  // namespace rsam::harness
