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

#include "rsam/gateway/gateway.h"

#include <algorithm>
#include <cstdlib>

#include "rsam/core/digest.h"

namespace rsam::gateway {
namespace {

using core::Decision;
using core::Lifecycle;
using core::LifecycleEvent;
using core::OutcomeState;

constexpr int kCrashExitCode = 86;

constexpr std::string_view kDoubtMessage =
    "request may already have executed upstream; confirm with the service "
    "owner before resubmitting";

// Hop-by-hop, transport and protocol headers never forwarded upstream.
bool forwardable(std::string_view name) {
  static constexpr std::string_view kDropped[] = {
      "Connection", "Keep-Alive", "Proxy-Connection", "Transfer-Encoding", "TE",
      "Trailer", "Upgrade", "Host", "Content-Length", "Content-Type",
      "REMOTE_ADDR", "REMOTE_PORT", "LOCAL_ADDR", "LOCAL_PORT"};
  for (auto d : kDropped) {
    if (core::iequals(name, d)) return false;
  }
  return !(name.size() >= 7 && core::iequals(name.substr(0, 7), "X-RSAM-"));
}

ProxyResponse protocol_reply(int status, OutcomeState state, std::string_view message,
                             const std::string& base_key = {}) {
  ProxyResponse r;
  r.status = status;
  r.headers.emplace_back(core::kHeaderState, core::to_string(state));
  if (!base_key.empty()) r.headers.emplace_back(core::kHeaderBaseKey, base_key);
  if (!message.empty()) r.headers.emplace_back(core::kHeaderMessage, message);
  return r;
}

ProxyResponse bare_error(std::string_view message) {
  ProxyResponse r;
  r.status = 500;
  r.body = std::string(message);
  r.content_type = "text/plain";
  return r;
}

ProxyResponse upstream_reply(ResponseRecord response, OutcomeState state) {
  ProxyResponse r;
  r.status = response.status_code;
  r.body = std::move(response.body);
  r.content_type = response.content_type;
  r.headers.emplace_back(core::kHeaderState, core::to_string(state));
  r.headers.emplace_back(core::kHeaderBaseKey, response.base_key);
  return r;
}

std::string strip_query(std::string_view target) {
  return std::string(target.substr(0, target.find('?')));
}

}  // namespace

std::string_view to_string(CrashPoint point) {
  return point == CrashPoint::kAfterForward ? "after-forward" : "none";
}

CrashPoint parse_crash_point(std::string_view text) {
  if (text == "none") return CrashPoint::kNone;
  if (text == "after-forward") return CrashPoint::kAfterForward;
  throw RsamError(ErrorCode::kInjectionUnsupportedPoint,
                  "unsupported crash point '" + std::string(text) + "'");
}

Gateway::Clock Gateway::system_clock() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

Gateway::Gateway(GatewayConfig config, std::shared_ptr<Upstream> upstream, Clock clock)
    : config_(std::move(config)),
      upstream_(std::move(upstream)),
      clock_(std::move(clock)),
      store_(config_.store_dir) {
  if (config_.allow_list.empty()) {
    throw RsamError(ErrorCode::kInvalidConfig, "allow-list must not be empty");
  }
}

Gateway::~Gateway() = default;

ProxyResponse Gateway::handle_proxy(ProxyRequest request) {
  try {
    return proxy(request);
  } catch (const std::exception& e) {
    return bare_error(std::string("gateway error: ") + e.what());
  }
}

ProxyResponse Gateway::proxy(const ProxyRequest& request) {
  if (fail_before_proxy_) return bare_error("gateway fault injected");

  // Pre-processing: filter, size, id.
  auto method = core::parse_method(request.method);
  const std::string path = strip_query(request.target);
  const AllowRule* rule = method ? config_.allow_list.match(*method, path) : nullptr;
  if (rule == nullptr) {
    return protocol_reply(403, OutcomeState::kFailed,
                          "FilterRejected: " + request.method + " " + path +
                              " is not allowed");
  }
  if (request.body.size() > config_.max_body) {
    return protocol_reply(413, OutcomeState::kFailed,
                          "PayloadTooLarge: body exceeds " +
                              std::to_string(config_.max_body) + " bytes");
  }
  auto raw_id = core::find_header(request.headers, core::kHeaderClientId);
  if (!raw_id) {
    return protocol_reply(400, OutcomeState::kFailed,
                          "MalformedId: missing " + std::string(core::kHeaderClientId));
  }
  core::ClientRequestId id;
  try {
    id = core::validate_id(*raw_id, clock_(), config_.max_skew);
  } catch (const RsamError& e) {
    return protocol_reply(400, OutcomeState::kFailed,
                          std::string(rsam::to_string(e.code())) + ": " + e.what());
  }
  auto forced_header = core::find_header(request.headers, core::kHeaderForced);
  if (forced_header && *forced_header != "0" && *forced_header != "1") {
    return protocol_reply(400, OutcomeState::kFailed,
                          "MalformedId: " + std::string(core::kHeaderForced) +
                              " must be 0 or 1");
  }
  const bool descriptor_forced = (forced_header == "1") || rule->forced;
  const bool idempotent = rule->is_idempotent();
  const std::string base_key = id.base_key();
  const core::Digest digest = core::sha256(request.body);

  core::Headers extra;
  for (const auto& [k, v] : request.headers) {
    if (forwardable(k)) extra.emplace_back(k, v);
  }

  // Processing: everything below runs with the key held.
  auto guard = key_locks_.lock(base_key);
  const core::EpochMs now = clock_();
  std::optional<RequestRecord> stored = lookup(base_key, now);
  const bool live = stored && stored->lifecycle != Lifecycle::kDeleted;
  std::optional<ResponseRecord> succeeded =
      live ? store_.latest_succeeded(base_key) : std::nullopt;
  const bool matches = stored && stored->method == *method &&
                       stored->target_path == request.target &&
                       stored->body_digest == digest;

  const Decision decision = core::decide(
      core::DecisionInput{stored ? std::optional(stored->lifecycle) : std::nullopt,
                          succeeded.has_value(), id.forced, descriptor_forced,
                          idempotent, matches});

  const auto remember_trial = [&](RequestRecord& record) {
    if (id.trial > record.trial_count) {
      record.trial_count = id.trial;
      store_.update(record);
    }
  };

  switch (decision) {
    case Decision::kForwardFirstTime: {
      if (stored) store_.purge_responses(base_key);
      RequestRecord record;
      record.base_key = base_key;
      record.device_id = id.device_id;
      record.method = *method;
      record.target_path = request.target;
      record.body_digest = digest;
      record.body = std::move(request.body);
      record.content_type = request.content_type;
      record.lifecycle = Lifecycle::kReceived;
      record.trial_count = id.trial;
      record.forced = id.forced || descriptor_forced;
      record.created_at = now;
      store_.upsert(record);

      record.lifecycle = core::transition(record.lifecycle, LifecycleEvent::kForward);
      record.forwarded_at = now;
      store_.update(record);
      return reply_for(attempt(record, id.trial, idempotent, extra), base_key,
                       idempotent);
    }

    case Decision::kForwardRetry: {
      RequestRecord& record = *stored;
      record.trial_count = std::max(record.trial_count, id.trial);
      record.forced = record.forced || id.forced || descriptor_forced;
      // A forced replay of a SUCCEEDED record keeps it SUCCEEDED.
      if (record.lifecycle == Lifecycle::kReceived) {
        record.lifecycle = core::transition(record.lifecycle, LifecycleEvent::kForward);
      } else if (record.lifecycle != Lifecycle::kSucceeded) {
        record.lifecycle = core::transition(record.lifecycle, LifecycleEvent::kRetry);
      }
      record.forwarded_at = now;
      store_.update(record);
      return reply_for(attempt(record, id.trial, idempotent, extra), base_key,
                       idempotent);
    }

    case Decision::kServeCached:
      remember_trial(*stored);
      return upstream_reply(std::move(*succeeded), OutcomeState::kCached);

    case Decision::kDoubt:
      remember_trial(*stored);
      return protocol_reply(409, OutcomeState::kDoubt, kDoubtMessage, base_key);

    case Decision::kRejectInvalid:
      return protocol_reply(422, OutcomeState::kDoubt,
                            "client id already used for a different request "
                            "(method, target or body differ)",
                            base_key);
  }
  return bare_error("unhandled decision");
}

ProxyResponse Gateway::reply_for(Attempt&& result, const std::string& base_key,
                                 bool idempotent) const {
  if (result.response) {
    const bool ok = result.response->outcome == ResponseOutcome::kSuccess;
    return upstream_reply(std::move(*result.response),
                          ok ? OutcomeState::kSucceeded : OutcomeState::kFailed);
  }
  const RsamError& err = *result.error;
  std::string message = std::string(rsam::to_string(err.code())) + ": " + err.what();
  if (err.code() == ErrorCode::kUpstreamTimeout) {
    if (!idempotent) {
      return protocol_reply(504, OutcomeState::kDoubt,
                            message + "; " + std::string(kDoubtMessage), base_key);
    }
    return protocol_reply(504, OutcomeState::kFailed, message, base_key);
  }
  return protocol_reply(502, OutcomeState::kFailed, message, base_key);
}

std::optional<RequestRecord> Gateway::lookup(const std::string& base_key,
                                             core::EpochMs now) const {
  auto record = store_.find(base_key);
  if (record && config_.cache_ttl && record->lifecycle == Lifecycle::kSucceeded) {
    auto latest = store_.latest_succeeded(base_key);
    if (latest && latest->received_at + config_.cache_ttl->count() < now) {
      // Expired: the key is forgotten and the next submission starts over.
      record->lifecycle = Lifecycle::kDeleted;
    }
  }
  return record;
}

void Gateway::maybe_crash() {
  if (crash_point_.load() != CrashPoint::kAfterForward) return;
  if (crash_action_) {
    crash_action_();
  } else {
    std::_Exit(kCrashExitCode);
  }
}

ResponseRecord Gateway::forward_upstream(RequestRecord& record, int trial,
                                         const core::Headers& extra_headers) {
  UpstreamRequest req;
  req.method = record.method;
  req.target = record.target_path;
  // Borrowed for the call and handed back below.
  req.body = std::move(record.body);
  req.content_type = record.content_type;
  req.headers = extra_headers;
  req.headers.emplace_back(core::kHeaderBaseKey, record.base_key);

  UpstreamResponse answer;
  try {
    answer = upstream_->send(req, config_.upstream_timeout);
  } catch (...) {
    record.body = std::move(req.body);
    maybe_crash();
    throw;
  }
  record.body = std::move(req.body);
  maybe_crash();

  const core::EpochMs now = clock_();
  ResponseRecord response;
  response.base_key = record.base_key;
  response.status_code = answer.status;
  response.body = std::move(answer.body);
  response.content_type = std::move(answer.content_type);
  response.outcome = outcome_for_status(answer.status);
  response.received_at = now;
  response.trial = trial;

  const Lifecycle before = record.lifecycle;
  const auto completed_before = record.completed_at;
  if (record.lifecycle == Lifecycle::kForwarded) {
    record.lifecycle = core::transition(
        record.lifecycle, response.outcome == ResponseOutcome::kSuccess
                              ? LifecycleEvent::kUpstreamOk
                              : LifecycleEvent::kUpstreamErr);
  }
  record.completed_at = now;
  try {
    store_.complete(record, response);
  } catch (...) {
    record.lifecycle = before;
    record.completed_at = completed_before;
    throw;
  }
  return response;
}

Gateway::Attempt Gateway::attempt(RequestRecord& record, int trial, bool idempotent,
                                  const core::Headers& extra_headers) {
  Attempt out;
  try {
    out.response = forward_upstream(record, trial, extra_headers);
    return out;
  } catch (const RsamError& e) {
    if (e.code() != ErrorCode::kUpstreamUnreachable &&
        e.code() != ErrorCode::kUpstreamTimeout) {
      throw;
    }
    out.error = e;
  }
  const bool outcome_known =
      out.error->code() == ErrorCode::kUpstreamUnreachable || idempotent;
  if (record.lifecycle == Lifecycle::kForwarded && outcome_known) {
    record.lifecycle = core::transition(record.lifecycle, LifecycleEvent::kUpstreamErr);
    record.completed_at = clock_();
    store_.update(record);
  }
  return out;
}

bool Gateway::idempotent_for(const RequestRecord& record) const {
  if (const AllowRule* rule =
          config_.allow_list.match(record.method, strip_query(record.target_path))) {
    return rule->is_idempotent();
  }
  return core::idempotent_by_default(record.method);
}

std::optional<ResponseRecord> Gateway::latest_succeeded_response(
    std::string_view base_key) const {
  return store_.latest_succeeded(base_key);
}

std::string Gateway::surface_state(const StoredEntry& entry) const {
  if (entry.record.lifecycle == Lifecycle::kForwarded &&
      !key_locks_.busy(entry.record.base_key)) {
    return std::string(kInDoubtWindow);
  }
  return std::string(core::to_string(entry.record.lifecycle));
}

std::vector<RequestSummary> Gateway::list_requests(const ListFilter& filter) const {
  std::vector<RequestSummary> out;
  for (const auto& entry : store_.list(filter.device_id)) {
    RequestSummary s;
    s.state = surface_state(entry);
    if (filter.state && *filter.state != s.state) continue;
    s.base_key = entry.record.base_key;
    s.device_id = entry.record.device_id;
    s.method = entry.record.method;
    s.target_path = entry.record.target_path;
    s.trial_count = entry.record.trial_count;
    s.created_at = entry.record.created_at;
    s.forwarded_at = entry.record.forwarded_at;
    s.completed_at = entry.record.completed_at;
    s.latest_outcome = entry.latest_outcome;
    out.push_back(std::move(s));
  }
  return out;
}

core::RsamOutcome Gateway::retry_request(const std::string& base_key) {
  auto guard = key_locks_.lock(base_key);
  auto stored = store_.find(base_key);
  if (!stored) {
    throw RsamError(ErrorCode::kNotFound, "no request with key " + base_key);
  }
  RequestRecord& record = *stored;
  if (record.lifecycle == Lifecycle::kSucceeded || record.lifecycle == Lifecycle::kDeleted) {
    throw RsamError(ErrorCode::kNotRetryable,
                    "request " + base_key + " is " +
                        std::string(core::to_string(record.lifecycle)));
  }
  const bool idempotent = idempotent_for(record);
  // A management retry is an explicit user decision, so it goes through the
  // decision function as forced and never yields DOUBT.
  const Decision decision = core::decide(core::DecisionInput{
      record.lifecycle, false, true, record.forced, idempotent, true});
  if (decision != Decision::kForwardRetry) {
    throw RsamError(ErrorCode::kNotRetryable,
                    "request " + base_key + " cannot be retried (" +
                        std::string(core::to_string(decision)) + ")");
  }

  const int trial = record.trial_count + 1;
  record.trial_count = trial;
  record.lifecycle = core::transition(record.lifecycle,
                                      record.lifecycle == Lifecycle::kReceived
                                          ? LifecycleEvent::kForward
                                          : LifecycleEvent::kRetry);
  record.forwarded_at = clock_();
  store_.update(record);

  Attempt result = attempt(record, trial, idempotent, {});
  core::RsamOutcome outcome;
  outcome.base_key = base_key;
  if (result.response) {
    outcome.state = result.response->outcome == ResponseOutcome::kSuccess
                        ? OutcomeState::kSucceeded
                        : OutcomeState::kFailed;
    outcome.payload = result.response->body;
    outcome.status_code = result.response->status_code;
    outcome.message = "upstream answered " + std::to_string(outcome.status_code);
    return outcome;
  }
  const RsamError& err = *result.error;
  outcome.message = std::string(rsam::to_string(err.code())) + ": " + err.what();
  if (err.code() == ErrorCode::kUpstreamTimeout && !idempotent) {
    outcome.state = OutcomeState::kDoubt;
    outcome.status_code = 504;
  } else {
    outcome.state = OutcomeState::kFailed;
    outcome.status_code = err.code() == ErrorCode::kUpstreamTimeout ? 504 : 502;
  }
  return outcome;
}

void Gateway::delete_request(const std::string& base_key) {
  auto guard = key_locks_.lock(base_key);
  auto stored = store_.find(base_key);
  if (!stored || stored->lifecycle == Lifecycle::kDeleted) {
    throw RsamError(ErrorCode::kNotFound, "no request with key " + base_key);
  }
  stored->lifecycle = core::transition(stored->lifecycle, LifecycleEvent::kDelete);
  store_.update(*stored);
}

RecoveryReport Gateway::recover_on_startup() {
  RecoveryReport report;
  report.doubt_window_records = store_.doubt_window_keys().size();
  return report;
}

}  // namespace rsam::gateway
