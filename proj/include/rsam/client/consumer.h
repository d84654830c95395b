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
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsam/client/local_store.h"
#include "rsam/client/registry.h"
#include "rsam/core/client_id.h"
#include "rsam/core/outcome.h"
#include "rsam/core/wire.h"

namespace rsam::client {

inline constexpr std::chrono::milliseconds kDefaultClientTimeout{45'000};
inline constexpr std::size_t kDefaultClientMaxBody = 16u * 1024u * 1024u;

// Host-supplied connectivity check; true means the network is up.
using ReachabilityProbe = std::function<bool()>;
inline bool always_reachable() { return true; }

// Result of one consume/retry/flush step. Either the request got an answer
// (`outcome` set) or it was parked in the offline queue.
struct ConsumeResult {
  PreparedRequest request;
  std::optional<core::RsamOutcome> outcome;
  std::string queued_reason;
  // Wall time of the network exchange only.
  std::chrono::microseconds elapsed{0};

  bool queued() const { return !outcome.has_value(); }
};

// A raw HTTP answer as seen by the client.
struct RawResponse {
  int status = 0;
  std::string body;
  core::Headers headers;
};

// Maps a response to an outcome without touching the payload bytes.
// Middleware answers use X-RSAM-State; direct answers map 2xx to SUCCEEDED
// and anything else to FAILED. Throws RsamError(kMissingStateHeader) for a
// middleware-routed answer without the header.
core::RsamOutcome adapt_response(const RawResponse& raw, bool middleware_routed,
                                 const std::string& base_key);

struct ConsumerConfig {
  std::string device_id;
  std::filesystem::path state_dir;
  std::chrono::milliseconds timeout = kDefaultClientTimeout;
  std::size_t max_body = kDefaultClientMaxBody;
  std::function<core::EpochMs()> clock;  // defaults to the system clock
};

// The client side of the protocol for one device.
class Consumer {
 public:
  Consumer(ServiceRegistry registry, ConsumerConfig config);

  // Throws RsamError(kUnknownService | kInvalidParams | kPayloadTooLarge).
  ConsumeResult consume(const std::string& service, const Params& params,
                        const std::string& body,
                        const ReachabilityProbe& network = always_reachable,
                        const std::string& content_type = "application/json");

  // Same base key, next trial. A queued prior is taken out of the queue first
  // and goes back in if it cannot be delivered.
  ConsumeResult retry(const ConsumeResult& prior,
                      const ReachabilityProbe& network = always_reachable);

  // Sends queued requests oldest first, each with its own id at the next
  // trial, and stops at the first one that is queued again.
  std::vector<ConsumeResult> flush_queue(const ReachabilityProbe& network = always_reachable);

  // Sends a prepared request exactly as given: no queue bookkeeping beyond
  // parking it when undeliverable, outcome logged.
  ConsumeResult send(const PreparedRequest& request,
                     const ReachabilityProbe& network = always_reachable);

  // Builds the request for a service with a fresh trial-1 id.
  PreparedRequest prepare(const std::string& service, const Params& params,
                          const std::string& body,
                          const std::string& content_type = "application/json");

  LocalStore& local() { return store_; }
  const ServiceRegistry& registry() const { return registry_; }
  const ConsumerConfig& config() const { return config_; }

 private:
  core::EpochMs next_timestamp();
  ConsumeResult deliver(const PreparedRequest& request, const ReachabilityProbe& network);
  ConsumeResult park(const PreparedRequest& request, std::string reason);

  ServiceRegistry registry_;
  ConsumerConfig config_;
  LocalStore store_;
  std::mutex clock_mu_;
  core::EpochMs last_timestamp_ = 0;
  std::mutex flush_mu_;
};

}  // namespace rsam::client
