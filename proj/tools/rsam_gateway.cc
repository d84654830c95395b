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

// rsam-gateway: the middleware service as a standalone process.
#include <signal.h>

#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "rsam/core/error.h"
#include "rsam/gateway/gateway.h"
#include "rsam/gateway/server.h"

namespace {

std::pair<std::string, int> split_listen(const std::string& listen) {
  auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    throw rsam::RsamError(rsam::ErrorCode::kInvalidConfig, "--listen wants HOST:PORT");
  }
  return {listen.substr(0, colon), std::stoi(listen.substr(colon + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RSAM gateway: deduplicating, caching reverse proxy with a request ledger"};
  std::string upstream, listen = "127.0.0.1:8080", allow_list, store = "rsam-store";
  std::string crash_point = "none", dashboard;
  long long timeout_ms = rsam::gateway::kDefaultUpstreamTimeout.count();
  long long ttl_ms = 0, skew_ms = rsam::core::kDefaultMaxSkew.count();
  std::size_t max_body = rsam::gateway::kDefaultMaxBody;
  int threads = 64;

  app.add_option("--upstream", upstream, "Cloud service base URL")
      ->envname("RSAM_UPSTREAM")
      ->required();
  app.add_option("--listen", listen, "HOST:PORT to serve on")->envname("RSAM_LISTEN");
  app.add_option("--allow-list", allow_list, "Allow-list file")
      ->envname("RSAM_ALLOW_LIST")
      ->required();
  app.add_option("--store", store, "Ledger directory")->envname("RSAM_STORE");
  app.add_option("--upstream-timeout-ms", timeout_ms, "Upstream timeout")
      ->envname("RSAM_UPSTREAM_TIMEOUT_MS");
  app.add_option("--cache-ttl-ms", ttl_ms, "Forget cached successes after this; 0 keeps them")
      ->envname("RSAM_CACHE_TTL_MS");
  app.add_option("--max-skew-ms", skew_ms, "Accepted client clock lead")
      ->envname("RSAM_MAX_SKEW_MS");
  app.add_option("--max-body", max_body, "Largest accepted request body")
      ->envname("RSAM_MAX_BODY");
  app.add_option("--threads", threads, "Worker threads")->envname("RSAM_THREADS");
  app.add_option("--crash-point", crash_point, "Fault injection: none | after-forward")
      ->envname("RSAM_CRASH_POINT");
  app.add_option("--dashboard", dashboard, "Static files served under /dashboard")
      ->envname("RSAM_DASHBOARD");
  CLI11_PARSE(app, argc, argv);

  try {
    rsam::gateway::GatewayConfig config;
    config.store_dir = store;
    config.allow_list = rsam::gateway::AllowList::load(allow_list);
    config.upstream_timeout = std::chrono::milliseconds(timeout_ms);
    config.max_skew = std::chrono::milliseconds(skew_ms);
    if (ttl_ms > 0) config.cache_ttl = std::chrono::milliseconds(ttl_ms);
    config.max_body = max_body;

    rsam::gateway::Gateway gateway(std::move(config),
                                   std::make_shared<rsam::gateway::HttpUpstream>(upstream));
    gateway.set_crash_point(rsam::gateway::parse_crash_point(crash_point));
    auto report = gateway.recover_on_startup();
    if (report.doubt_window_records > 0) {
      std::cout << "recovered ledger: " << report.doubt_window_records
                << " request(s) in the doubt window" << std::endl;
    }

    auto [host, port] = split_listen(listen);
    rsam::gateway::ServerOptions opts;
    opts.host = host;
    opts.port = port;
    opts.threads = threads;
    if (!dashboard.empty()) opts.dashboard_dir = dashboard;
    rsam::gateway::GatewayServer server(gateway, opts);

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    server.start();
    std::cout << "rsam-gateway listening on " << server.url() << " -> " << upstream
              << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
    return 0;
  } catch (const rsam::RsamError& e) {
    std::cerr << "rsam-gateway: " << rsam::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "rsam-gateway: " << e.what() << "\n";
    return 1;
  }
}
