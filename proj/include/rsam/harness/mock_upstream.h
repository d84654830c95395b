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

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "rsam/harness/relay.h"

namespace httplib {
class Server;
}

namespace rsam::harness {

struct RouteFault {
  int status = 200;
  std::chrono::milliseconds latency{0};
  // Size of a generated response body; unset echoes the request body.
  std::optional<std::size_t> body_bytes;

  friend bool operator==(const RouteFault&, const RouteFault&) = default;
};

// What the mock upstream does right now. Routes are keyed by path without
// the query; "*" applies to paths with no entry of their own.
struct FaultScript {
  bool reachable = true;
  std::map<std::string, RouteFault> routes;
  // Read by the crash runner, which starts the gateway with the crash point.
  bool crash_gateway_after_forward = false;

  const RouteFault& route(const std::string& path) const;

  friend bool operator==(const FaultScript&, const FaultScript&) = default;
};

std::string fault_script_to_json(const FaultScript& script);
// Throws RsamError(kInvalidConfig).
FaultScript fault_script_from_json(const std::string& text);

// Deterministic pseudo-random bytes covering every byte value.
const std::string& generated_payload(std::size_t size);

// Scriptable cloud service. Data traffic goes through a counting relay (so
// reachability can be switched off at the TCP level); the control endpoint
// POST /__fault is also served on the direct port, which stays up.
//
//   POST /__fault        body: FaultScript JSON, replaces the script
//   GET  /__fault        {"script": ..., "invocations": {base_key: n}, "total": n}
//   POST /__fault/reset  zeroes the counters
class MockUpstream {
 public:
  MockUpstream();
  ~MockUpstream();

  MockUpstream(const MockUpstream&) = delete;
  MockUpstream& operator=(const MockUpstream&) = delete;

  std::string url() const { return relay_->url(); }
  std::string control_url() const;
  CountingRelay& relay() { return *relay_; }

  void apply(FaultScript script);
  FaultScript script() const;

  // Requests without X-RSAM-Base-Key (direct route) count under "".
  int invocations(const std::string& base_key) const;
  int total_invocations() const;
  void reset_counters();

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::unique_ptr<CountingRelay> relay_;

  mutable std::mutex mu_;
  FaultScript script_;
  std::map<std::string, int> invocations_;
  int total_ = 0;
};

}  // namespace rsam::harness
