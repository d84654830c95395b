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

#include "rsam/harness/deployment.h"

#include <sstream>
#include <thread>

namespace rsam::harness {

client::ServiceRegistry harness_registry(const std::string& middleware_url,
                                         const std::string& cloud_url) {
  using core::HttpMethod;
  client::ServiceRegistry reg(middleware_url, cloud_url);
  reg.add(core::make_descriptor("post", HttpMethod::kPost, "/feeds/posts"));
  reg.add(core::make_descriptor("latest", HttpMethod::kGet, "/feeds/latest"));
  auto login = core::make_descriptor("login", HttpMethod::kPost, "/auth/login");
  login.forced = true;
  reg.add(login);
  auto upload = core::make_descriptor("upload", HttpMethod::kPost, "/bench/upload");
  upload.response_kind = core::ResponseKind::kBinary;
  reg.add(upload);
  upload.name = "upload-direct";
  upload.direct = true;
  reg.add(upload);
  return reg;
}

std::string harness_allow_list() {
  return "POST /feeds/posts\n"
         "GET /feeds/*\n"
         "POST /auth/login forced\n"
         "POST /bench/upload\n";
}

Deployment::Deployment(std::filesystem::path work_dir, DeploymentOptions options)
    : work_dir_(std::move(work_dir)), options_(std::move(options)) {
  std::filesystem::create_directories(work_dir_);
  gateway_port_ = pick_free_port();
  start_gateway();
  gateway_relay_ = std::make_unique<CountingRelay>("127.0.0.1", gateway_port_);

  client::ConsumerConfig cfg;
  cfg.device_id = options_.device_id;
  cfg.state_dir = work_dir_ / "client";
  cfg.timeout = options_.client_timeout;
  consumer_ = std::make_unique<client::Consumer>(
      harness_registry(gateway_relay_->url(), cloud_.url()), cfg);
}

Deployment::~Deployment() {
  consumer_.reset();
  gateway_relay_.reset();
  stop_gateway();
}

void Deployment::start_gateway() {
  if (server_) return;
  gateway::GatewayConfig config;
  config.store_dir = work_dir_ / "gateway";
  std::istringstream rules(harness_allow_list());
  config.allow_list = gateway::AllowList::parse(rules);
  config.upstream_timeout = options_.upstream_timeout;
  gateway_ = std::make_unique<gateway::Gateway>(
      std::move(config), std::make_shared<gateway::HttpUpstream>(cloud_.url()));
  gateway_->recover_on_startup();
  gateway::ServerOptions opts;
  opts.port = gateway_port_;
  server_ = std::make_unique<gateway::GatewayServer>(*gateway_, opts);
  server_->start();
}

void Deployment::stop_gateway() {
  if (server_) server_->stop();
  server_.reset();
  gateway_.reset();
}

void Deployment::restart_gateway() {
  stop_gateway();
  start_gateway();
}

bool Deployment::wait_until_settled(const std::string& base_key,
                                    std::chrono::milliseconds limit) {
  auto deadline = std::chrono::steady_clock::now() + limit;
  while (std::chrono::steady_clock::now() < deadline) {
    if (gateway_) {
      auto rec = gateway_->store().find(base_key);
      if (rec && rec->lifecycle != core::Lifecycle::kReceived &&
          rec->lifecycle != core::Lifecycle::kForwarded) {
        return true;
      }
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  return false;
}

}  // namespace rsam::harness
