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

#include "rsam/harness/crash.h"

#include <httplib.h>

#include <fstream>
#include <json.hpp>
#include <thread>

#include "rsam/client/consumer.h"
#include "rsam/harness/deployment.h"
#include "rsam/harness/mock_upstream.h"
#include "rsam/harness/process.h"

namespace rsam::harness {
namespace {

using core::OutcomeState;
using namespace std::chrono_literals;

constexpr int kCrashExit = 86;

bool wait_ready(int port, ChildProcess& child, std::chrono::milliseconds limit) {
  httplib::Client probe("127.0.0.1", port);
  probe.set_connection_timeout(200ms);
  auto deadline = std::chrono::steady_clock::now() + limit;
  while (std::chrono::steady_clock::now() < deadline) {
    if (!child.running()) return false;
    if (auto res = probe.Get(std::string(core::kManagementRoot))) {
      if (res->status == 200) return true;
    }
    std::this_thread::sleep_for(50ms);
  }
  return false;
}

std::string state_of(int port, const std::string& base_key) {
  httplib::Client c("127.0.0.1", port);
  auto res = c.Get(std::string(core::kManagementRoot));
  if (!res || res->status != 200) return "<unavailable>";
  for (const auto& j : nlohmann::json::parse(res->body)) {
    if (j.value("base_key", "") == base_key) return j.value("state", "");
  }
  return "<absent>";
}

std::string describe(const client::ConsumeResult& r) {
  return r.queued() ? "Queued" : std::string(core::to_string(r.outcome->state));
}

bool is(const client::ConsumeResult& r, OutcomeState s) {
  return r.outcome && r.outcome->state == s;
}

}  // namespace

ScenarioReport crash_injection(const CrashOptions& options) {
  if (options.point != gateway::CrashPoint::kAfterForward) {
    throw RsamError(ErrorCode::kInjectionUnsupportedPoint,
                    "crash point '" + std::string(gateway::to_string(options.point)) +
                        "' is not supported");
  }
  ScenarioReport rep;
  rep.name = "crash-after-forward";
  rep.expected = "POST DOUBT, GET SUCCEEDED";
  auto start = std::chrono::steady_clock::now();
  auto check = [&](bool ok, std::string what) {
    rep.assertions.push_back({std::move(what), ok});
    return ok;
  };

  try {
    const auto dir = options.work_dir / "crash";
    std::filesystem::create_directories(dir);
    const auto allow = dir / "allow.txt";
    std::ofstream(allow) << harness_allow_list();
    const auto log = dir / "gateway.log";

    MockUpstream cloud;
    FaultScript script;
    script.crash_gateway_after_forward = true;
    cloud.apply(script);

    const int port = pick_free_port();
    auto launch = [&](bool crash) {
      std::vector<std::string> args{"--upstream",   cloud.url(),
                                    "--listen",     "127.0.0.1:" + std::to_string(port),
                                    "--allow-list", allow.string(),
                                    "--store",      (dir / "store").string()};
      if (crash) {
        args.push_back("--crash-point");
        args.push_back(std::string(gateway::to_string(options.point)));
      }
      auto child = std::make_unique<ChildProcess>(options.gateway_binary, args, log);
      if (!wait_ready(port, *child, 15s)) {
        throw RsamError(ErrorCode::kIo, "gateway did not come up; see " + log.string());
      }
      return child;
    };

    client::ConsumerConfig cfg;
    cfg.device_id = "crash-device";
    cfg.state_dir = dir / "client";
    cfg.timeout = 10s;
    client::Consumer consumer(
        harness_registry("http://127.0.0.1:" + std::to_string(port), cloud.url()), cfg);

    // Control: no injection.
    {
      auto gw = launch(false);
      auto control = consumer.consume("post", {}, R"({"text":"control"})");
      check(is(control, OutcomeState::kSucceeded),
            "without injection a POST is SUCCEEDED (got " + describe(control) + ")");
      gw->terminate();
    }

    // Crash once per route.
    client::ConsumeResult post, get;
    {
      auto gw = launch(script.crash_gateway_after_forward);
      post = consumer.consume("post", {}, R"({"text":"charge once"})");
      auto code = gw->wait_exit(10s);
      check(code == kCrashExit, "gateway died after forwarding the POST");
      check(post.queued(), "client saw no answer for the POST (got " + describe(post) + ")");
    }
    {
      auto gw = launch(script.crash_gateway_after_forward);
      get = consumer.consume("latest", {}, "");
      auto code = gw->wait_exit(10s);
      check(code == kCrashExit, "gateway died after forwarding the GET");
      check(get.queued(), "client saw no answer for the GET (got " + describe(get) + ")");
    }
    const std::string post_key = post.request.id.base_key();
    const std::string get_key = get.request.id.base_key();
    check(cloud.invocations(post_key) == 1, "POST reached the upstream once");
    check(cloud.invocations(get_key) == 1, "GET reached the upstream once");

    // Restart without injection on the same port and store.
    auto gw = launch(false);
    const std::string window = state_of(port, post_key);
    check(window == gateway::kInDoubtWindow,
          "POST listed as IN_DOUBT_WINDOW after restart (got " + window + ")");

    auto post_retry = consumer.retry(post);
    auto get_retry = consumer.retry(get);
    rep.observed = "POST " + describe(post_retry) + ", GET " + describe(get_retry);
    check(is(post_retry, OutcomeState::kDoubt),
          "POST retry is DOUBT (got " + describe(post_retry) + ")");
    check(post_retry.outcome && post_retry.outcome->payload.empty(), "DOUBT has no payload");
    check(cloud.invocations(post_key) == 1, "POST not re-executed");
    check(is(get_retry, OutcomeState::kSucceeded),
          "GET retry is SUCCEEDED (got " + describe(get_retry) + ")");
    check(cloud.invocations(get_key) == 2, "GET re-forwarded once");
    gw->terminate();
  } catch (const ScenarioFailed&) {
    throw;
  } catch (const std::exception& e) {
    check(false, std::string("unexpected error: ") + e.what());
  }

  rep.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  if (!rep.passed()) throw ScenarioFailed(std::move(rep));
  return rep;
}

}  // namespace rsam::harness
