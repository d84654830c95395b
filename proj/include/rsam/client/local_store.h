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

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rsam/core/client_id.h"
#include "rsam/core/descriptor.h"
#include "rsam/core/outcome.h"

namespace rsam::client {

// Everything needed to send (or re-send) one logical request.
struct PreparedRequest {
  std::string service;
  core::ClientRequestId id;
  core::HttpMethod method = core::HttpMethod::kGet;
  std::string target;  // path plus query
  std::string body;
  std::string content_type;

  friend bool operator==(const PreparedRequest&, const PreparedRequest&) = default;
};

struct QueuedRequest {
  PreparedRequest request;
  core::EpochMs enqueued_at = 0;
  std::string last_error;

  friend bool operator==(const QueuedRequest&, const QueuedRequest&) = default;
};

struct LoggedOutcome {
  PreparedRequest request;
  core::RsamOutcome outcome;
  core::EpochMs at = 0;

  friend bool operator==(const LoggedOutcome&, const LoggedOutcome&) = default;
};

inline constexpr std::size_t kOutcomeLogCap = 1000;

// Per-device durable client state: the offline queue and a capped outcome log.
// The queue is one JSON file rewritten atomically (temp file, then rename);
// the log is JSON lines, appended and trimmed now and then. Bodies are base64.
class LocalStore {
 public:
  explicit LocalStore(std::filesystem::path dir, std::size_t log_cap = kOutcomeLogCap);

  // Ordered by enqueued_at. A request whose base key is already queued
  // replaces the old entry in place.
  void enqueue(QueuedRequest item);
  std::optional<QueuedRequest> remove(const std::string& base_key);
  std::vector<QueuedRequest> queue() const;

  void log(LoggedOutcome entry);
  std::vector<LoggedOutcome> outcomes() const;
  // Latest logged outcome for a base key.
  std::optional<LoggedOutcome> last_outcome(const std::string& base_key) const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::vector<QueuedRequest> read_queue() const;
  void write_queue(const std::vector<QueuedRequest>& items) const;
  std::vector<LoggedOutcome> read_log() const;
  void write_log(const std::vector<LoggedOutcome>& items) const;

  std::filesystem::path dir_;
  std::size_t log_cap_;
  std::size_t log_lines_ = 0;
  mutable std::mutex mu_;
};

}  // namespace rsam::client
