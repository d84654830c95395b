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

#include <httplib.h>

#include "rsam/core/error.h"
#include "rsam/gateway/api_json.h"

namespace rsam::gateway {
namespace {

constexpr const char* kJson = "application/json";

void write(ProxyResponse&& from, httplib::Response& to) {
  to.status = from.status;
  for (const auto& [k, v] : from.headers) to.set_header(k, v);
  if (!from.body.empty() || !from.content_type.empty()) {
    to.set_content(std::move(from.body), from.content_type.empty()
                                             ? "application/octet-stream"
                                             : from.content_type);
  }
}

void write_error(const RsamError& e, httplib::Response& res) {
  switch (e.code()) {
    case ErrorCode::kNotFound: res.status = 404; break;
    case ErrorCode::kNotRetryable: res.status = 409; break;
    default: res.status = 500; break;
  }
  res.set_content(error_to_json(rsam::to_string(e.code()), e.what()), kJson);
}

}  // namespace

GatewayServer::GatewayServer(Gateway& gateway, ServerOptions options)
    : gateway_(gateway),
      options_(std::move(options)),
      server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;
  const int threads = options_.threads;
  srv.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  srv.set_tcp_nodelay(true);
  srv.set_payload_max_length(gateway_.config().max_body + 1);

  auto proxy = [this](const httplib::Request& req, httplib::Response& res) {
    ProxyRequest p;
    p.method = req.method;
    std::string target = req.target.substr(core::kProxyMount.size());
    p.target = target.empty() || target.front() != '/' ? "/" + target : target;
    // httplib does not read the body again once the handler runs.
    p.body = std::move(const_cast<httplib::Request&>(req).body);
    p.content_type = req.get_header_value("Content-Type");
    for (const auto& [k, v] : req.headers) p.headers.emplace_back(k, v);
    write(gateway_.handle_proxy(std::move(p)), res);
  };
  const std::string pattern = std::string(core::kProxyMount) + "(/.*)?";
  srv.Get(pattern, proxy);
  srv.Post(pattern, proxy);
  srv.Put(pattern, proxy);
  srv.Patch(pattern, proxy);
  srv.Delete(pattern, proxy);
  srv.Options(pattern, proxy);

  const std::string root(core::kManagementRoot);
  srv.Get(root, [this](const httplib::Request& req, httplib::Response& res) {
    ListFilter filter;
    if (req.has_param("device_id") && !req.get_param_value("device_id").empty()) {
      filter.device_id = req.get_param_value("device_id");
    }
    if (req.has_param("state") && !req.get_param_value("state").empty()) {
      filter.state = req.get_param_value("state");
    }
    try {
      res.set_content(summaries_to_json(gateway_.list_requests(filter)), kJson);
    } catch (const RsamError& e) {
      write_error(e, res);
    }
  });
  srv.Post(root + "/([^/]+)/retry",
           [this](const httplib::Request& req, httplib::Response& res) {
             // Routes match the decoded path, so the capture is the key itself.
             try {
               auto outcome = gateway_.retry_request(req.matches[1].str());
               res.set_content(outcome_to_json(outcome), kJson);
             } catch (const RsamError& e) {
               write_error(e, res);
             }
           });
  srv.Delete(root + "/([^/]+)", [this](const httplib::Request& req,
                                       httplib::Response& res) {
    try {
      std::string key = req.matches[1].str();
      gateway_.delete_request(key);
      res.set_content(deleted_to_json(key), kJson);
    } catch (const RsamError& e) {
      write_error(e, res);
    }
  });

  if (options_.dashboard_dir) {
    srv.set_mount_point("/dashboard", options_.dashboard_dir->string());
  }
}

GatewayServer::~GatewayServer() { stop(); }

int GatewayServer::bind() {
  if (options_.port == 0) {
    port_ = server_->bind_to_any_port(options_.host);
  } else {
    port_ = server_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ < 0) {
    throw RsamError(ErrorCode::kIo, "cannot bind " + options_.host + ":" +
                                        std::to_string(options_.port));
  }
  return port_;
}

int GatewayServer::start() {
  int port = bind();
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port;
}

void GatewayServer::run() {
  bind();
  server_->listen_after_bind();
}

void GatewayServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string GatewayServer::url() const {
  return "http://" + options_.host + ":" + std::to_string(port_);
}

}  // namespace rsam::gateway
