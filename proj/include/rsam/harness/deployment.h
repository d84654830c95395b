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
#include <filesystem>
#include <memory>
#include <string>

#include "rsam/client/consumer.h"
#include "rsam/gateway/gateway.h"
#include "rsam/gateway/server.h"
#include "rsam/harness/mock_upstream.h"
#include "rsam/harness/relay.h"

namespace rsam::harness {

// Services every harness deployment knows about.
//   post    POST /feeds/posts   via gateway
//   latest  GET  /feeds/latest  via gateway
//   login   POST /auth/login    via gateway, forced
//   upload  POST /bench/upload  via gateway
//   upload-direct  POST /bench/upload straight to the cloud
client::ServiceRegistry harness_registry(const std::string& middleware_url,
                                         const std::string& cloud_url);
// Allow-list text matching harness_registry().
std::string harness_allow_list();

struct DeploymentOptions {
  std::chrono::milliseconds client_timeout{45'000};
  std::chrono::milliseconds upstream_timeout = gateway::kDefaultUpstreamTimeout;
  std::string device_id = "harness-device";
};

// Mock cloud, gateway and one consumer wired together on loopback, each hop
// behind a counting relay:
//   consumer -> gateway relay -> gateway -> cloud relay -> mock cloud
//   consumer -> cloud relay -> mock cloud              (direct route)
class Deployment {
 public:
  Deployment(std::filesystem::path work_dir, DeploymentOptions options = {});
  ~Deployment();

  MockUpstream& cloud() { return cloud_; }
  gateway::Gateway& gateway() { return *gateway_; }
  client::Consumer& consumer() { return *consumer_; }
  CountingRelay& gateway_relay() { return *gateway_relay_; }
  const std::filesystem::path& work_dir() const { return work_dir_; }

  // Tears the gateway down and brings it back on the same port and store.
  void stop_gateway();
  void start_gateway();
  void restart_gateway();
  bool gateway_running() const { return server_ != nullptr; }

  // Polls the gateway store until the key leaves RECEIVED/FORWARDED.
  bool wait_until_settled(const std::string& base_key,
                          std::chrono::milliseconds limit = std::chrono::seconds(15));

 private:
  std::filesystem::path work_dir_;
  DeploymentOptions options_;
  MockUpstream cloud_;
  int gateway_port_ = 0;
  std::unique_ptr<gateway::Gateway> gateway_;
  std::unique_ptr<gateway::GatewayServer> server_;
  std::unique_ptr<CountingRelay> gateway_relay_;
  std::unique_ptr<client::Consumer> consumer_;
};

}  // namespace rsam::harness
