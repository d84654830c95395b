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

#include "rsam/client/local_store.h"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rsam/core/digest.h"
#include "rsam/core/error.h"

namespace rsam::client {
namespace {

using nlohmann::json;

constexpr const char* kQueueFile = "queue.json";
constexpr const char* kLogFile = "outcomes.jsonl";

std::string unbase64(const json& j) {
  auto raw = core::base64_decode(j.get<std::string>());
  if (!raw) throw RsamError(ErrorCode::kIo, "bad base64 in client store");
  return *raw;
}

json request_to_json(const PreparedRequest& r) {
  return {{"service", r.service},
          {"id", core::encode_id(r.id)},
          {"method", core::to_string(r.method)},
          {"target", r.target},
          {"body", core::base64_encode(r.body)},
          {"content_type", r.content_type}};
}

PreparedRequest request_from_json(const json& j) {
  PreparedRequest r;
  r.service = j.at("service").get<std::string>();
  r.id = core::parse_id(j.at("id").get<std::string>());
  auto method = core::parse_method(j.at("method").get<std::string>());
  if (!method) throw RsamError(ErrorCode::kIo, "bad method in client store");
  r.method = *method;
  r.target = j.at("target").get<std::string>();
  r.body = unbase64(j.at("body"));
  r.content_type = j.at("content_type").get<std::string>();
  return r;
}

json read_json(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return json::array();
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw RsamError(ErrorCode::kIo, file.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& file, const json& doc) {
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump();
    out.flush();
    if (!out) throw RsamError(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw RsamError(ErrorCode::kIo, "cannot replace " + file.string() + ": " + ec.message());
}

}  // namespace

LocalStore::LocalStore(std::filesystem::path dir, std::size_t log_cap)
    : dir_(std::move(dir)), log_cap_(log_cap) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw RsamError(ErrorCode::kIo, "cannot create " + dir_.string());
  std::ifstream in(dir_ / kLogFile, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) log_lines_ += line.empty() ? 0 : 1;
}

std::vector<QueuedRequest> LocalStore::read_queue() const {
  std::vector<QueuedRequest> out;
  try {
    for (const auto& j : read_json(dir_ / kQueueFile)) {
      out.push_back({request_from_json(j.at("request")), j.at("enqueued_at").get<core::EpochMs>(),
                     j.value("last_error", "")});
    }
  } catch (const json::exception& e) {
    throw RsamError(ErrorCode::kIo, std::string("queue: ") + e.what());
  }
  return out;
}

void LocalStore::write_queue(const std::vector<QueuedRequest>& items) const {
  json doc = json::array();
  for (const auto& q : items) {
    doc.push_back({{"request", request_to_json(q.request)},
                   {"enqueued_at", q.enqueued_at},
                   {"last_error", q.last_error}});
  }
  write_json(dir_ / kQueueFile, doc);
}

namespace {

json outcome_to_json(const LoggedOutcome& e) {
  return {{"request", request_to_json(e.request)},
          {"state", core::to_string(e.outcome.state)},
          {"payload", core::base64_encode(e.outcome.payload)},
          {"message", e.outcome.message},
          {"base_key", e.outcome.base_key},
          {"status_code", e.outcome.status_code},
          {"at", e.at}};
}

LoggedOutcome outcome_from_json(const json& j) {
  LoggedOutcome e;
  e.request = request_from_json(j.at("request"));
  auto state = core::parse_outcome_state(j.at("state").get<std::string>());
  if (!state) throw RsamError(ErrorCode::kIo, "bad state in outcome log");
  e.outcome.state = *state;
  e.outcome.payload = unbase64(j.at("payload"));
  e.outcome.message = j.value("message", "");
  e.outcome.base_key = j.at("base_key").get<std::string>();
  e.outcome.status_code = j.value("status_code", 0);
  e.at = j.at("at").get<core::EpochMs>();
  return e;
}

}  // namespace

std::vector<LoggedOutcome> LocalStore::read_log() const {
  std::vector<LoggedOutcome> out;
  std::ifstream in(dir_ / kLogFile, std::ios::binary);
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      out.push_back(outcome_from_json(json::parse(line)));
    }
  } catch (const json::exception& e) {
    throw RsamError(ErrorCode::kIo, std::string("outcome log: ") + e.what());
  }
  if (out.size() > log_cap_) {
    out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(out.size() - log_cap_));
  }
  return out;
}

void LocalStore::write_log(const std::vector<LoggedOutcome>& items) const {
  std::string text;
  for (const auto& e : items) text += outcome_to_json(e).dump() + "\n";
  auto tmp = dir_ / kLogFile;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw RsamError(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, dir_ / kLogFile);
}

void LocalStore::enqueue(QueuedRequest item) {
  std::lock_guard lock(mu_);
  auto items = read_queue();
  const std::string key = item.request.id.base_key();
  auto it = std::find_if(items.begin(), items.end(), [&](const QueuedRequest& q) {
    return q.request.id.base_key() == key;
  });
  if (it != items.end()) {
    item.enqueued_at = it->enqueued_at;
    *it = std::move(item);
  } else {
    auto pos = std::upper_bound(items.begin(), items.end(), item.enqueued_at,
                                [](core::EpochMs at, const QueuedRequest& q) {
                                  return at < q.enqueued_at;
                                });
    items.insert(pos, std::move(item));
  }
  write_queue(items);
}

std::optional<QueuedRequest> LocalStore::remove(const std::string& base_key) {
  std::lock_guard lock(mu_);
  auto items = read_queue();
  auto it = std::find_if(items.begin(), items.end(), [&](const QueuedRequest& q) {
    return q.request.id.base_key() == base_key;
  });
  if (it == items.end()) return std::nullopt;
  QueuedRequest out = std::move(*it);
  items.erase(it);
  write_queue(items);
  return out;
}

std::vector<QueuedRequest> LocalStore::queue() const {
  std::lock_guard lock(mu_);
  return read_queue();
}

void LocalStore::log(LoggedOutcome entry) {
  std::lock_guard lock(mu_);
  {
    std::ofstream out(dir_ / kLogFile, std::ios::binary | std::ios::app);
    out << outcome_to_json(entry).dump() << '\n';
    if (!out) throw RsamError(ErrorCode::kIo, "cannot append to outcome log");
  }
  // Appends are cheap; trim back to the cap once a quarter of slack builds up.
  if (++log_lines_ > log_cap_ + log_cap_ / 4) {
    write_log(read_log());
    log_lines_ = log_cap_;
  }
}

std::vector<LoggedOutcome> LocalStore::outcomes() const {
  std::lock_guard lock(mu_);
  return read_log();
}

std::optional<LoggedOutcome> LocalStore::last_outcome(const std::string& base_key) const {
  auto items = outcomes();
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    if (it->request.id.base_key() == base_key) return *it;
  }
  return std::nullopt;
}

}  // namespace rsam::client
