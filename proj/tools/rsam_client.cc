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

// rsam-client: drive a Consumer from the shell.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rsam/client/consumer.h"
#include "rsam/core/error.h"

namespace {

using rsam::client::ConsumeResult;

// 0 delivered, 2 FAILED, 3 DOUBT, 4 queued.
int exit_code(const ConsumeResult& r) {
  if (r.queued()) return 4;
  switch (r.outcome->state) {
    case rsam::core::OutcomeState::kSucceeded:
    case rsam::core::OutcomeState::kCached:
      return 0;
    case rsam::core::OutcomeState::kFailed:
      return 2;
    case rsam::core::OutcomeState::kDoubt:
      return 3;
  }
  return 1;
}

void print(const ConsumeResult& r, bool body) {
  const auto& id = r.request.id;
  if (r.queued()) {
    std::cout << "Queued " << id.base_key() << " trial=" << id.trial << " (" << r.queued_reason
              << ")\n";
    return;
  }
  std::cout << rsam::core::to_string(r.outcome->state) << ' ' << r.outcome->status_code << ' '
            << id.base_key() << " trial=" << id.trial;
  if (!r.outcome->message.empty()) std::cout << " (" << r.outcome->message << ')';
  std::cout << '\n';
  if (body) std::cout << r.outcome->payload << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rsam::RsamError(rsam::ErrorCode::kIo, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RSAM client consumer"};
  app.require_subcommand(1);
  std::string registry_file, state_dir = "rsam-client", device;
  long long timeout_ms = rsam::client::kDefaultClientTimeout.count();
  bool offline = false, show_body = false;
  app.add_option("--registry", registry_file, "Service registry JSON")
      ->envname("RSAM_REGISTRY")
      ->required();
  app.add_option("--state-dir", state_dir, "Queue and outcome log directory")
      ->envname("RSAM_CLIENT_STATE");
  app.add_option("--device", device, "Device id")->envname("RSAM_DEVICE")->required();
  app.add_option("--timeout-ms", timeout_ms, "Request timeout")->envname("RSAM_CLIENT_TIMEOUT_MS");
  app.add_flag("--offline", offline, "Report the network as unreachable");
  app.add_flag("--print-body", show_body, "Print the payload after the status line");

  auto* send = app.add_subcommand("send", "Consume a service");
  std::string service, body, body_file, content_type = "application/json";
  std::vector<std::string> params;
  send->add_option("service", service, "Service name")->required();
  send->add_option("--param", params, "key=value, repeatable");
  send->add_option("--body", body, "Request body");
  send->add_option("--body-file", body_file, "Read the request body from a file");
  send->add_option("--content-type", content_type, "Body content type");

  auto* retry = app.add_subcommand("retry", "Re-send a request with its base key");
  std::string base_key;
  retry->add_option("base_key", base_key, "Base key of the earlier request")->required();

  auto* flush = app.add_subcommand("flush", "Deliver the offline queue");
  auto* status = app.add_subcommand("status", "Show the queue and recent outcomes");
  std::size_t last = 10;
  status->add_option("--last", last, "Outcomes to show");
  CLI11_PARSE(app, argc, argv);

  try {
    rsam::client::ConsumerConfig cfg;
    cfg.device_id = device;
    cfg.state_dir = state_dir;
    cfg.timeout = std::chrono::milliseconds(timeout_ms);
    rsam::client::Consumer consumer(rsam::client::ServiceRegistry::load(registry_file), cfg);
    rsam::client::ReachabilityProbe network = [offline] { return !offline; };

    if (*send) {
      rsam::client::Params p;
      for (const auto& kv : params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
          throw rsam::RsamError(rsam::ErrorCode::kInvalidParams, "--param wants key=value");
        }
        p[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      if (!body_file.empty()) body = read_file(body_file);
      auto r = consumer.consume(service, p, body, network, content_type);
      print(r, show_body);
      return exit_code(r);
    }
    if (*retry) {
      ConsumeResult prior;
      if (auto q = consumer.local().remove(base_key)) {
        prior.request = q->request;
        consumer.local().enqueue(*q);
      } else if (auto logged = consumer.local().last_outcome(base_key)) {
        prior.request = logged->request;
      } else {
        throw rsam::RsamError(rsam::ErrorCode::kNotFound, "no local record of " + base_key);
      }
      auto r = consumer.retry(prior, network);
      print(r, show_body);
      return exit_code(r);
    }
    if (*flush) {
      auto results = consumer.flush_queue(network);
      int rc = 0;
      for (const auto& r : results) {
        print(r, show_body);
        rc = std::max(rc, exit_code(r));
      }
      std::cout << consumer.local().queue().size() << " left in queue\n";
      return rc;
    }
    if (*status) {
      auto queue = consumer.local().queue();
      std::cout << "queue (" << queue.size() << "):\n";
      for (const auto& q : queue) {
        std::cout << "  " << q.request.id.base_key() << " trial=" << q.request.id.trial << ' '
                  << rsam::core::to_string(q.request.method) << ' ' << q.request.target
                  << " (" << q.last_error << ")\n";
      }
      auto log = consumer.local().outcomes();
      std::size_t from = log.size() > last ? log.size() - last : 0;
      std::cout << "outcomes (last " << log.size() - from << " of " << log.size() << "):\n";
      for (std::size_t i = from; i < log.size(); ++i) {
        std::cout << "  " << rsam::core::to_string(log[i].outcome.state) << ' '
                  << log[i].outcome.status_code << ' ' << log[i].request.id.base_key()
                  << " trial=" << log[i].request.id.trial << '\n';
      }
      return 0;
    }
  } catch (const rsam::RsamError& e) {
    std::cerr << "rsam-client: " << rsam::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "rsam-client: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
