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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "rsam/gateway/gateway.h"

namespace httplib {
class Server;
}

namespace rsam::gateway {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port
  int threads = 64;
  // Static files served under /dashboard when set.
  std::optional<std::filesystem::path> dashboard_dir;
};

// HTTP front of a Gateway:
//   ANY    /proxy/{service_path...}
//   GET    /rsam/requests?device_id=&state=
//   POST   /rsam/requests/{base_key}/retry
//   DELETE /rsam/requests/{base_key}
// {base_key} is percent-encoded in the URL.
class GatewayServer {
 public:
  GatewayServer(Gateway& gateway, ServerOptions options = {});
  ~GatewayServer();

  GatewayServer(const GatewayServer&) = delete;
  GatewayServer& operator=(const GatewayServer&) = delete;

  // Binds and serves on a background thread; returns the bound port.
  // Throws RsamError(kIo) when the address cannot be bound.
  int start();
  // Binds and serves on the calling thread until stop().
  void run();
  void stop();

  int port() const { return port_; }
  std::string url() const;

 private:
  int bind();

  Gateway& gateway_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace rsam::gateway
