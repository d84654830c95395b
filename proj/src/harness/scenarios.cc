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

#include "rsam/harness/scenarios.h"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "rsam/harness/deployment.h"

namespace rsam::harness {
namespace {

using client::ConsumeResult;
using core::OutcomeState;
using namespace std::chrono_literals;

std::string state_name(const ConsumeResult& r) {
  return r.queued() ? "Queued" : std::string(core::to_string(r.outcome->state));
}

bool is(const ConsumeResult& r, OutcomeState s) { return r.outcome && r.outcome->state == s; }

// Collects assertions for one report.
class Checker {
 public:
  explicit Checker(ScenarioReport& report) : report_(report) {}
  bool operator()(bool ok, std::string what) {
    report_.assertions.push_back({std::move(what), ok});
    return ok;
  }

 private:
  ScenarioReport& report_;
};

FaultScript route_fault(const std::string& path, RouteFault fault) {
  FaultScript s;
  s.routes[path] = fault;
  return s;
}

void row_all_reachable(Deployment& d, ScenarioReport& rep) {
  Checker check(rep);
  const std::string body = R"({"text":"all reachable"})";
  auto r = d.consumer().consume("post", {}, body);
  rep.observed = state_name(r);
  check(is(r, OutcomeState::kSucceeded), "outcome is SUCCEEDED (got " + rep.observed + ")");
  check(r.outcome && r.outcome->payload == body, "payload equals upstream body");
  check(d.cloud().invocations(r.request.id.base_key()) == 1, "upstream invoked once");
}

void row_cloud_unreachable(Deployment& d, ScenarioReport& rep) {
  Checker check(rep);
  FaultScript down;
  down.reachable = false;
  d.cloud().apply(down);
  auto r = d.consumer().consume("post", {}, "x");
  rep.observed = state_name(r);
  check(is(r, OutcomeState::kFailed), "outcome is FAILED (got " + rep.observed + ")");
  check(r.outcome && r.outcome->status_code == 502, "gateway answered 502");
  check(d.cloud().total_invocations() == 0, "upstream never invoked");
  auto rec = d.gateway().store().find(r.request.id.base_key());
  check(rec && rec->lifecycle == core::Lifecycle::kFailed, "gateway record is FAILED");
}

void row_cloud_error(Deployment& d, ScenarioReport& rep) {
  Checker check(rep);
  d.cloud().apply(route_fault("/feeds/posts", RouteFault{500, 0ms, std::nullopt}));
  auto r = d.consumer().consume("post", {}, "x");
  rep.observed = state_name(r);
  const std::string key = r.request.id.base_key();
  check(is(r, OutcomeState::kFailed), "outcome is FAILED (got " + rep.observed + ")");
  check(r.outcome && r.outcome->status_code == 500, "upstream status 500 passed through");
  check(d.cloud().invocations(key) == 1, "upstream invoked once");

  d.cloud().apply(FaultScript{});
  auto again = d.consumer().retry(r);
  check(is(again, OutcomeState::kSucceeded),
        "retry after clearing the fault is SUCCEEDED (got " + state_name(again) + ")");
  check(again.request.id.base_key() == key && again.request.id.trial == 2,
        "retry keeps the base key with trial 2");
  check(d.cloud().invocations(key) == 2, "upstream invoked twice in total");
}

void row_middleware_down(Deployment& d, ScenarioReport& rep) {
  Checker check(rep);
  d.stop_gateway();
  auto unreachable = d.consumer().consume("post", {}, "while down");
  d.start_gateway();
  d.gateway().set_fail_before_proxy(true);
  auto erroring = d.consumer().consume("post", {}, "while erroring");
  rep.observed = state_name(unreachable) == state_name(erroring)
                     ? state_name(unreachable)
                     : state_name(unreachable) + "/" + state_name(erroring);
  check(unreachable.queued(), "middleware unreachable: Queued (got " +
                                  state_name(unreachable) + ")");
  check(erroring.queued(), "middleware server error: Queued (got " + state_name(erroring) + ")");
  check(d.cloud().total_invocations() == 0, "upstream never invoked");
  check(d.consumer().local().queue().size() == 2, "both requests in the local queue");

  d.gateway().set_fail_before_proxy(false);
  auto flushed = d.consumer().flush_queue();
  bool all_ok = flushed.size() == 2 &&
                std::all_of(flushed.begin(), flushed.end(),
                            [](const ConsumeResult& f) { return is(f, OutcomeState::kSucceeded); });
  check(all_ok, "flush after recovery delivers both as SUCCEEDED");
  check(d.consumer().local().queue().empty(), "queue empty after flush");
  check(d.cloud().total_invocations() == 2, "upstream invoked once per request");
}

void row_mobile_offline(Deployment& d, ScenarioReport& rep) {
  Checker check(rep);
  auto r = d.consumer().consume("post", {}, "offline", [] { return false; });
  rep.observed = state_name(r);
  check(r.queued(), "outcome is Queued (got " + rep.observed + ")");
  check(d.gateway_relay().connections().empty(), "nothing sent to the gateway");
  check(d.gateway().list_requests().empty(), "gateway holds no record");
  check(d.cloud().total_invocations() == 0, "upstream never invoked");
  check(d.consumer().local().queue().size() == 1, "request in the local queue");
}

void row_timed_out(Deployment& d, ScenarioReport& rep) {
  Checker check(rep);
  d.cloud().apply(route_fault("/feeds/posts", RouteFault{200, 3000ms, std::nullopt}));
  const std::string body = R"({"text":"slow but sure"})";
  auto first = d.consumer().consume("post", {}, body);
  const std::string key = first.request.id.base_key();
  check(first.queued() && first.queued_reason.find("timed out") != std::string::npos,
        "first attempt times out on the client (got " + state_name(first) + ")");
  check(d.wait_until_settled(key), "gateway completes the forwarded request");
  auto again = d.consumer().retry(first);
  rep.observed = state_name(again) + "-on-retry";
  check(is(again, OutcomeState::kCached), "retry is CACHED (got " + state_name(again) + ")");
  check(again.outcome && again.outcome->payload == body, "cached body matches exactly");
  check(again.request.id.base_key() == key, "retry keeps the base key");
  check(d.cloud().invocations(key) == 1, "upstream invoked once");
}

struct Row {
  ScenarioInfo info;
  void (*run)(Deployment&, ScenarioReport&);
  std::chrono::milliseconds client_timeout;
};

const std::vector<Row>& rows() {
  static const std::vector<Row> kRows = {
      {{1, "all-reachable", "Reachable", "Reachable", "Reachable", "SUCCEEDED"},
       row_all_reachable, 10s},
      {{2, "cloud-unreachable", "Reachable", "Reachable", "Non-Reachable", "FAILED"},
       row_cloud_unreachable, 10s},
      {{3, "cloud-error", "Reachable", "Reachable", "Server Error", "FAILED"},
       row_cloud_error, 10s},
      {{4, "middleware-down", "Reachable", "Non-Reachable/Server Error", "Any", "Queued"},
       row_middleware_down, 10s},
      {{5, "mobile-offline", "Non-Reachable", "Any", "Any", "Queued"}, row_mobile_offline, 10s},
      {{6, "timed-out", "Timed Out", "Reachable", "Reachable", "CACHED-on-retry"},
       row_timed_out, 1s},
  };
  return kRows;
}

ScenarioReport finish(ScenarioReport rep, std::chrono::steady_clock::time_point start) {
  rep.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  if (!rep.passed()) throw ScenarioFailed(std::move(rep));
  return rep;
}

}  // namespace

bool ScenarioReport::passed() const {
  return !assertions.empty() &&
         std::all_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.passed; });
}

std::string ScenarioReport::first_failure() const {
  for (const auto& a : assertions) {
    if (!a.passed) return a.what;
  }
  return assertions.empty() ? "no assertions ran" : "";
}

ScenarioFailed::ScenarioFailed(ScenarioReport report)
    : RsamError(ErrorCode::kScenarioFailed, report.name + ": " + report.first_failure()),
      report_(std::move(report)) {}

const std::vector<ScenarioInfo>& scenario_table() {
  static const std::vector<ScenarioInfo> kTable = [] {
    std::vector<ScenarioInfo> out;
    for (const auto& r : rows()) out.push_back(r.info);
    return out;
  }();
  return kTable;
}

ScenarioReport run_scenario(std::string_view which, const std::filesystem::path& work_dir) {
  const Row* row = nullptr;
  for (const auto& r : rows()) {
    if (which == r.info.name || which == std::to_string(r.info.row)) row = &r;
  }
  if (row == nullptr) {
    throw RsamError(ErrorCode::kInvalidParams, "unknown scenario '" + std::string(which) + "'");
  }
  ScenarioReport rep;
  rep.row = row->info.row;
  rep.name = row->info.name;
  rep.expected = row->info.expected;
  auto start = std::chrono::steady_clock::now();
  {
    DeploymentOptions opts;
    opts.client_timeout = row->client_timeout;
    Deployment d(work_dir / ("row" + std::to_string(row->info.row)), opts);
    try {
      row->run(d, rep);
    } catch (const std::exception& e) {
      rep.assertions.push_back({std::string("unexpected error: ") + e.what(), false});
    }
  }
  if (rep.observed != rep.expected) {
    rep.assertions.push_back(
        {"terminal state " + rep.observed + " differs from expected " + rep.expected, false});
  }
  return finish(std::move(rep), start);
}

std::vector<ScenarioReport> run_all_scenarios(const std::filesystem::path& work_dir) {
  std::vector<ScenarioReport> out;
  for (const auto& info : scenario_table()) {
    try {
      out.push_back(run_scenario(std::to_string(info.row), work_dir));
    } catch (const ScenarioFailed& f) {
      out.push_back(f.report());
    }
  }
  return out;
}

ScenarioReport run_dedup(const std::filesystem::path& work_dir, int copies) {
  ScenarioReport rep;
  rep.name = "dedup";
  rep.expected = "1 invocation, " + std::to_string(copies - 1) + " CACHED";
  auto start = std::chrono::steady_clock::now();
  Checker check(rep);
  try {
    Deployment d(work_dir / "dedup", {});
    d.cloud().apply(route_fault("/feeds/posts", RouteFault{200, 300ms, std::nullopt}));
    auto request = d.consumer().prepare("post", {}, R"({"text":"once"})");
    std::vector<ConsumeResult> results(static_cast<std::size_t>(copies));
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < results.size(); ++i) {
      threads.emplace_back([&, i] { results[i] = d.consumer().send(request); });
    }
    for (auto& t : threads) t.join();

    std::map<std::string, int> histogram;
    for (const auto& r : results) ++histogram[state_name(r)];
    const int invocations = d.cloud().invocations(request.id.base_key());
    rep.observed = std::to_string(invocations) + " invocation(s), " +
                   std::to_string(histogram["CACHED"]) + " CACHED";
    check(invocations == 1, "exactly one upstream invocation (got " +
                                std::to_string(invocations) + ")");
    check(histogram["SUCCEEDED"] == 1, "exactly one SUCCEEDED");
    check(histogram["CACHED"] == copies - 1,
          "the other " + std::to_string(copies - 1) + " are CACHED");
  } catch (const std::exception& e) {
    check(false, std::string("unexpected error: ") + e.what());
  }
  return finish(std::move(rep), start);
}

ScenarioReport run_forced(const std::filesystem::path& work_dir, int count) {
  ScenarioReport rep;
  rep.name = "forced";
  rep.expected = std::to_string(count) + " invocations, 0 CACHED";
  auto start = std::chrono::steady_clock::now();
  Checker check(rep);
  try {
    Deployment d(work_dir / "forced", {});
    auto first = d.consumer().consume("login", {}, R"({"user":"u"})");
    std::vector<ConsumeResult> results{first};
    for (int i = 1; i < count; ++i) results.push_back(d.consumer().retry(results.back()));
    int cached = 0;
    for (const auto& r : results) cached += is(r, OutcomeState::kCached) ? 1 : 0;
    const int invocations = d.cloud().invocations(first.request.id.base_key());
    rep.observed = std::to_string(invocations) + " invocations, " + std::to_string(cached) +
                   " CACHED";
    check(invocations == count, "one upstream invocation per submission");
    check(cached == 0, "never CACHED");
    check(std::all_of(results.begin(), results.end(),
                      [](const ConsumeResult& r) { return is(r, OutcomeState::kSucceeded); }),
          "every submission SUCCEEDED");
  } catch (const std::exception& e) {
    check(false, std::string("unexpected error: ") + e.what());
  }
  return finish(std::move(rep), start);
}

ScenarioReport run_durability(const std::filesystem::path& work_dir) {
  ScenarioReport rep;
  rep.name = "durability";
  rep.expected = "cached and states intact after restart";
  auto start = std::chrono::steady_clock::now();
  Checker check(rep);
  try {
    Deployment d(work_dir / "durability", {});
    const std::string body = R"({"text":"persist me"})";
    auto ok = d.consumer().consume("post", {}, body);
    d.cloud().apply(route_fault("/feeds/latest", RouteFault{503, 0ms, std::nullopt}));
    auto failed = d.consumer().consume("latest", {}, "");
    d.cloud().apply(FaultScript{});
    auto before = d.gateway().list_requests();

    d.restart_gateway();

    auto after = d.gateway().list_requests();
    bool same = before.size() == after.size() && before.size() == 2;
    for (std::size_t i = 0; same && i < before.size(); ++i) {
      same = before[i].base_key == after[i].base_key && before[i].state == after[i].state &&
             before[i].trial_count == after[i].trial_count;
    }
    check(same, "listing identical across the restart");
    auto cached = d.consumer().retry(ok);
    rep.observed = state_name(cached);
    check(is(cached, OutcomeState::kCached), "success served from cache after restart (got " +
                                                 state_name(cached) + ")");
    check(cached.outcome && cached.outcome->payload == body, "cached body intact");
    check(d.cloud().invocations(ok.request.id.base_key()) == 1, "no second invocation");
    auto rec = d.gateway().store().find(failed.request.id.base_key());
    check(rec && rec->lifecycle == core::Lifecycle::kFailed, "failed record still FAILED");
  } catch (const std::exception& e) {
    check(false, std::string("unexpected error: ") + e.what());
  }
  return finish(std::move(rep), start);
}

std::string format_report(const ScenarioReport& report) {
  std::ostringstream out;
  out << (report.passed() ? "PASS" : "FAIL") << "  ";
  if (report.row > 0) out << "row " << report.row << " ";
  out << report.name << ": expected " << report.expected << ", observed "
      << (report.observed.empty() ? "-" : report.observed) << " (" << report.elapsed.count()
      << " ms)\n";
  for (const auto& a : report.assertions) {
    out << "    [" << (a.passed ? "ok" : "!!") << "] " << a.what << "\n";
  }
  return out.str();
}

}  // namespace rsam::harness
