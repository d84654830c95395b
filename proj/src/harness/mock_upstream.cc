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

#include "rsam/harness/mock_upstream.h"

#include <httplib.h>

#include <json.hpp>
#include <random>

#include "rsam/core/error.h"
#include "rsam/core/wire.h"

namespace rsam::harness {
namespace {

using nlohmann::json;

const RouteFault kDefaultRoute{};

}  // namespace

const RouteFault& FaultScript::route(const std::string& path) const {
  if (auto it = routes.find(path); it != routes.end()) return it->second;
  if (auto it = routes.find("*"); it != routes.end()) return it->second;
  return kDefaultRoute;
}

std::string fault_script_to_json(const FaultScript& script) {
  json routes = json::object();
  for (const auto& [path, r] : script.routes) {
    json j{{"status", r.status}, {"latency_ms", r.latency.count()}};
    j["body_bytes"] = r.body_bytes ? json(*r.body_bytes) : json(nullptr);
    routes[path] = j;
  }
  return json{{"reachable", script.reachable},
              {"routes", routes},
              {"crash_gateway_after_forward", script.crash_gateway_after_forward}}
      .dump();
}

FaultScript fault_script_from_json(const std::string& text) {
  try {
    json doc = json::parse(text);
    FaultScript s;
    s.reachable = doc.value("reachable", true);
    s.crash_gateway_after_forward = doc.value("crash_gateway_after_forward", false);
    const json routes = doc.value("routes", json::object());
    if (!routes.is_object()) {
      throw RsamError(ErrorCode::kInvalidConfig, "fault script: routes must be an object");
    }
    for (const auto& [path, j] : routes.items()) {
      RouteFault r;
      r.status = j.value("status", 200);
      r.latency = std::chrono::milliseconds(j.value("latency_ms", 0));
      if (j.contains("body_bytes") && !j["body_bytes"].is_null()) {
        r.body_bytes = j["body_bytes"].get<std::size_t>();
      }
      s.routes[path] = r;
    }
    return s;
  } catch (const json::exception& e) {
    throw RsamError(ErrorCode::kInvalidConfig, std::string("fault script: ") + e.what());
  }
}

const std::string& generated_payload(std::size_t size) {
  static std::mutex mu;
  static std::map<std::size_t, std::string> cache;
  std::lock_guard lock(mu);
  auto [it, fresh] = cache.try_emplace(size);
  if (fresh) {
    std::mt19937 rng(static_cast<std::uint32_t>(size));
    it->second.resize(size);
    for (auto& c : it->second) c = static_cast<char>(rng() & 0xff);
  }
  return it->second;
}

MockUpstream::MockUpstream() : server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;
  srv.new_task_queue = [] { return new httplib::ThreadPool(32); };
  srv.set_tcp_nodelay(true);
  srv.set_payload_max_length(64u * 1024u * 1024u);

  auto state = [this] {
    std::lock_guard lock(mu_);
    json inv = json::object();
    for (const auto& [k, n] : invocations_) inv[k] = n;
    return json{{"script", json::parse(fault_script_to_json(script_))},
                {"invocations", inv},
                {"total", total_}}
        .dump();
  };
  srv.Post("/__fault", [this, state](const httplib::Request& req, httplib::Response& res) {
    try {
      apply(fault_script_from_json(req.body));
      res.set_content(state(), "application/json");
    } catch (const RsamError& e) {
      res.status = 400;
      res.set_content(json{{"error", rsam::to_string(e.code())}, {"message", e.what()}}.dump(),
                      "application/json");
    }
  });
  srv.Get("/__fault", [state](const httplib::Request&, httplib::Response& res) {
    res.set_content(state(), "application/json");
  });
  srv.Post("/__fault/reset", [this, state](const httplib::Request&, httplib::Response& res) {
    reset_counters();
    res.set_content(state(), "application/json");
  });

  auto serve = [this](const httplib::Request& req, httplib::Response& res) {
    RouteFault fault;
    {
      std::lock_guard lock(mu_);
      fault = script_.route(req.path);
      ++invocations_[req.get_header_value(std::string(core::kHeaderBaseKey))];
      ++total_;
    }
    if (fault.latency.count() > 0) std::this_thread::sleep_for(fault.latency);
    res.status = fault.status;
    if (fault.body_bytes) {
      res.set_content(generated_payload(*fault.body_bytes), "application/octet-stream");
    } else {
      std::string type = req.get_header_value("Content-Type");
      res.set_content(req.body, type.empty() ? "application/octet-stream" : type);
    }
  };
  const std::string any = "/.*";
  srv.Get(any, serve);
  srv.Post(any, serve);
  srv.Put(any, serve);
  srv.Patch(any, serve);
  srv.Delete(any, serve);

  port_ = srv.bind_to_any_port("127.0.0.1");
  if (port_ < 0) throw RsamError(ErrorCode::kIo, "mock upstream cannot bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  relay_ = std::make_unique<CountingRelay>("127.0.0.1", port_);
}

MockUpstream::~MockUpstream() {
  relay_.reset();
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockUpstream::control_url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

void MockUpstream::apply(FaultScript script) {
  relay_->set_reachable(script.reachable);
  std::lock_guard lock(mu_);
  script_ = std::move(script);
}

FaultScript MockUpstream::script() const {
  std::lock_guard lock(mu_);
  return script_;
}

int MockUpstream::invocations(const std::string& base_key) const {
  std::lock_guard lock(mu_);
  auto it = invocations_.find(base_key);
  return it == invocations_.end() ? 0 : it->second;
}

int MockUpstream::total_invocations() const {
  std::lock_guard lock(mu_);
  return total_;
}

void MockUpstream::reset_counters() {
  std::lock_guard lock(mu_);
  invocations_.clear();
  total_ = 0;
}

}  // namespace rsam::harness
