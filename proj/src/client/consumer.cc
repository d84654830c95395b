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

#include "rsam/client/consumer.h"

#include <httplib.h>

#include <algorithm>

#include "rsam/core/error.h"

namespace rsam::client {
namespace {

using core::OutcomeState;

enum class Failure { kNone, kUnreachable, kTimeout };

struct Exchange {
  std::optional<RawResponse> response;
  Failure failure = Failure::kNone;
  std::string error;
  std::chrono::microseconds elapsed{0};
};

Exchange exchange(const std::string& base_url, const std::string& path,
                  const PreparedRequest& request, const core::Headers& headers,
                  std::chrono::milliseconds timeout) {
  core::BaseUrl base = core::split_base_url(base_url);
  httplib::Client client(base.origin);
  client.set_keep_alive(false);
  client.set_tcp_nodelay(true);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Request req;
  req.method = std::string(core::to_string(request.method));
  req.path = base.prefix + path;
  for (const auto& [k, v] : headers) req.set_header(k, v);
  if (!request.content_type.empty()) req.set_header("Content-Type", request.content_type);
  req.body = request.body;

  Exchange out;
  auto start = std::chrono::steady_clock::now();
  auto result = client.send(req);
  out.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - start);
  if (!result) {
    auto err = result.error();
    out.error = base.origin + ": " + httplib::to_string(err);
    out.failure = err == httplib::Error::Connection ||
                          err == httplib::Error::ConnectionTimeout ||
                          err == httplib::Error::BindIPAddress
                      ? Failure::kUnreachable
                      : Failure::kTimeout;
    return out;
  }
  RawResponse raw;
  raw.status = result->status;
  raw.body = std::move(result->body);
  for (const auto& [k, v] : result->headers) raw.headers.emplace_back(k, v);
  out.response = std::move(raw);
  return out;
}

}  // namespace

core::RsamOutcome adapt_response(const RawResponse& raw, bool middleware_routed,
                                 const std::string& base_key) {
  core::RsamOutcome out;
  out.payload = raw.body;
  out.status_code = raw.status;
  out.base_key = base_key;
  if (!middleware_routed) {
    out.state = raw.status >= 200 && raw.status < 300 ? OutcomeState::kSucceeded
                                                       : OutcomeState::kFailed;
    return out;
  }
  auto header = core::find_header(raw.headers, core::kHeaderState);
  if (!header) {
    throw RsamError(ErrorCode::kMissingStateHeader,
                    "middleware answer " + std::to_string(raw.status) + " has no " +
                        std::string(core::kHeaderState));
  }
  auto state = core::parse_outcome_state(*header);
  if (!state) {
    throw RsamError(ErrorCode::kMissingStateHeader, "unknown state '" + *header + "'");
  }
  out.state = *state;
  out.message = core::find_header(raw.headers, core::kHeaderMessage).value_or("");
  if (auto key = core::find_header(raw.headers, core::kHeaderBaseKey)) out.base_key = *key;
  return out;
}

Consumer::Consumer(ServiceRegistry registry, ConsumerConfig config)
    : registry_(std::move(registry)), config_(std::move(config)), store_(config_.state_dir) {
  if (config_.device_id.empty()) {
    throw RsamError(ErrorCode::kEmptyDeviceId, "consumer needs a device id");
  }
  if (!config_.clock) {
    config_.clock = [] {
      return std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::system_clock::now().time_since_epoch())
          .count();
    };
  }
}

core::EpochMs Consumer::next_timestamp() {
  // Strictly increasing so two actions in the same millisecond stay distinct.
  std::lock_guard lock(clock_mu_);
  last_timestamp_ = std::max(config_.clock(), last_timestamp_ + 1);
  return last_timestamp_;
}

PreparedRequest Consumer::prepare(const std::string& service, const Params& params,
                                  const std::string& body, const std::string& content_type) {
  const core::ServiceDescriptor& d = registry_.get(service);
  if (body.size() > config_.max_body) {
    throw RsamError(ErrorCode::kPayloadTooLarge,
                    "body of " + std::to_string(body.size()) + " bytes exceeds " +
                        std::to_string(config_.max_body));
  }
  PreparedRequest r;
  r.service = service;
  r.method = d.method;
  r.target = render_target(d, params);
  r.body = body;
  r.content_type = body.empty() ? std::string() : content_type;
  r.id = core::generate_client_id(config_.device_id, next_timestamp(), r.target, 1, d.forced);
  return r;
}

ConsumeResult Consumer::consume(const std::string& service, const Params& params,
                                const std::string& body, const ReachabilityProbe& network,
                                const std::string& content_type) {
  return send(prepare(service, params, body, content_type), network);
}

ConsumeResult Consumer::retry(const ConsumeResult& prior, const ReachabilityProbe& network) {
  registry_.get(prior.request.service);
  PreparedRequest next = prior.request;
  next.id = prior.request.id.next_trial();
  store_.remove(next.id.base_key());
  return send(next, network);
}

std::vector<ConsumeResult> Consumer::flush_queue(const ReachabilityProbe& network) {
  std::lock_guard lock(flush_mu_);
  std::vector<ConsumeResult> out;
  for (const QueuedRequest& item : store_.queue()) {
    if (!network()) break;
    PreparedRequest next = item.request;
    next.id = item.request.id.next_trial();
    ConsumeResult result = send(next, network);
    out.push_back(result);
    if (result.queued()) break;
  }
  return out;
}

ConsumeResult Consumer::send(const PreparedRequest& request, const ReachabilityProbe& network) {
  ConsumeResult result = deliver(request, network);
  if (result.outcome) {
    store_.remove(request.id.base_key());
    store_.log(LoggedOutcome{request, *result.outcome, config_.clock()});
  }
  return result;
}

ConsumeResult Consumer::park(const PreparedRequest& request, std::string reason) {
  store_.enqueue(QueuedRequest{request, config_.clock(), reason});
  ConsumeResult r;
  r.request = request;
  r.queued_reason = std::move(reason);
  return r;
}

ConsumeResult Consumer::deliver(const PreparedRequest& request,
                                const ReachabilityProbe& network) {
  const core::ServiceDescriptor& d = registry_.get(request.service);
  const std::string base_key = request.id.base_key();

  if (d.direct) {
    // No middleware to deduplicate, so nothing is queued: fail fast.
    ConsumeResult r;
    r.request = request;
    if (!network()) {
      r.outcome = core::RsamOutcome{OutcomeState::kFailed, "", "network unreachable",
                                    base_key, 0};
      return r;
    }
    const std::string& root = d.base_url.empty() ? registry_.cloud_url() : d.base_url;
    Exchange ex = exchange(root, request.target, request, {}, config_.timeout);
    r.elapsed = ex.elapsed;
    if (!ex.response) {
      r.outcome = core::RsamOutcome{OutcomeState::kFailed, "", ex.error, base_key, 0};
    } else {
      r.outcome = adapt_response(*ex.response, false, base_key);
    }
    return r;
  }

  if (!network()) return park(request, "network unreachable");

  core::Headers headers{{std::string(core::kHeaderClientId), core::encode_id(request.id)}};
  if (request.id.forced || d.forced) headers.emplace_back(core::kHeaderForced, "1");
  Exchange ex = exchange(registry_.middleware_url(),
                         std::string(core::kProxyMount) + request.target, request, headers,
                         config_.timeout);
  if (!ex.response) {
    ConsumeResult r = park(request, ex.failure == Failure::kUnreachable
                                        ? "middleware unreachable: " + ex.error
                                        : "timed out: " + ex.error);
    r.elapsed = ex.elapsed;
    return r;
  }
  if (ex.response->status >= 500 &&
      !core::find_header(ex.response->headers, core::kHeaderState)) {
    ConsumeResult r =
        park(request, "middleware error " + std::to_string(ex.response->status));
    r.elapsed = ex.elapsed;
    return r;
  }
  ConsumeResult r;
  r.request = request;
  r.elapsed = ex.elapsed;
  r.outcome = adapt_response(*ex.response, true, base_key);
  return r;
}

}  // namespace rsam::client
