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

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsam/core/client_id.h"
#include "rsam/core/decision.h"
#include "rsam/core/error.h"
#include "rsam/core/outcome.h"
#include "rsam/core/wire.h"
#include "rsam/gateway/allow_list.h"
#include "rsam/gateway/keyed_mutex.h"
#include "rsam/gateway/records.h"
#include "rsam/gateway/store.h"
#include "rsam/gateway/upstream.h"

namespace rsam::gateway {

inline constexpr std::size_t kDefaultMaxBody = 16u * 1024u * 1024u;
inline constexpr std::chrono::milliseconds kDefaultUpstreamTimeout{45'000};

// Points where the gateway can be made to die for crash testing.
enum class CrashPoint { kNone, kAfterForward };

std::string_view to_string(CrashPoint point);
// Accepts "none" and "after-forward". Throws RsamError(kInjectionUnsupportedPoint).
CrashPoint parse_crash_point(std::string_view text);

struct GatewayConfig {
  std::filesystem::path store_dir;
  AllowList allow_list;
  std::chrono::milliseconds upstream_timeout = kDefaultUpstreamTimeout;
  std::chrono::milliseconds max_skew = core::kDefaultMaxSkew;
  // Cached successes older than this are forgotten; nullopt keeps them forever.
  std::optional<std::chrono::milliseconds> cache_ttl;
  std::size_t max_body = kDefaultMaxBody;
};

// A request as it arrives on the proxy mount, transport-independent.
struct ProxyRequest {
  std::string method;
  std::string target;  // path after the mount point, plus "?query" if any
  std::string body;
  std::string content_type;
  core::Headers headers;
};

struct ProxyResponse {
  int status = 200;
  std::string body;
  std::string content_type;
  core::Headers headers;

  std::optional<std::string> header(std::string_view name) const {
    return core::find_header(headers, name);
  }
};

struct ListFilter {
  std::optional<std::string> device_id;
  std::optional<std::string> state;  // surface state, e.g. FAILED, IN_DOUBT_WINDOW
};

// Startup report of recover_on_startup().
struct RecoveryReport {
  std::size_t doubt_window_records = 0;
};

// The middleware service component: filter, validate, persist, decide,
// forward, persist the answer, reply. Thread-safe; work on one base key is
// serialized, distinct keys proceed in parallel.
class Gateway {
 public:
  using Clock = std::function<core::EpochMs()>;

  Gateway(GatewayConfig config, std::shared_ptr<Upstream> upstream,
          Clock clock = system_clock());
  ~Gateway();

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  // Never throws: every failure becomes an HTTP answer. Store failures
  // produce a bare 500 without an X-RSAM-State header.
  ProxyResponse handle_proxy(ProxyRequest request);

  // Sends a stored record upstream. The FORWARDED transition (or, for a forced
  // replay, the SUCCEEDED state) must already be persisted. On any HTTP answer
  // the response is stored and `record` advanced in one transaction.
  // Throws RsamError(kUpstreamUnreachable | kUpstreamTimeout) leaving both the
  // store and `record` untouched.
  ResponseRecord forward_upstream(RequestRecord& record, int trial,
                                  const core::Headers& extra_headers = {});

  std::optional<ResponseRecord> latest_succeeded_response(std::string_view base_key) const;

  std::vector<RequestSummary> list_requests(const ListFilter& filter = {}) const;

  // Throws RsamError(kNotFound | kNotRetryable).
  core::RsamOutcome retry_request(const std::string& base_key);

  // Throws RsamError(kNotFound).
  void delete_request(const std::string& base_key);

  // Checks the store; crash-window records are left untouched.
  RecoveryReport recover_on_startup();

  // Fault hooks for the harness.
  void set_crash_point(CrashPoint point) { crash_point_ = point; }
  void set_crash_action(std::function<void()> action) { crash_action_ = std::move(action); }
  // When set, proxy requests get a bare 500 before any processing.
  void set_fail_before_proxy(bool fail) { fail_before_proxy_ = fail; }

  const GatewayConfig& config() const { return config_; }
  Store& store() { return store_; }

  static Clock system_clock();

 private:
  struct Attempt {
    std::optional<ResponseRecord> response;
    std::optional<RsamError> error;
  };

  ProxyResponse proxy(const ProxyRequest& request);
  std::optional<RequestRecord> lookup(const std::string& base_key, core::EpochMs now) const;
  // Forwards and applies the error rules: unreachable -> FAILED, timeout ->
  // FAILED for idempotent requests, otherwise left FORWARDED (outcome unknown).
  Attempt attempt(RequestRecord& record, int trial, bool idempotent,
                  const core::Headers& extra_headers);
  ProxyResponse reply_for(Attempt&& result, const std::string& base_key,
                          bool idempotent) const;
  bool idempotent_for(const RequestRecord& record) const;
  std::string surface_state(const StoredEntry& entry) const;
  void maybe_crash();

  GatewayConfig config_;
  std::shared_ptr<Upstream> upstream_;
  Clock clock_;
  Store store_;
  KeyedMutex key_locks_;

  std::atomic<CrashPoint> crash_point_{CrashPoint::kNone};
  std::function<void()> crash_action_;
  std::atomic<bool> fail_before_proxy_{false};
};

}  // namespace rsam::gateway
