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

#include <condition_variable>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "rsam/gateway/records.h"

struct sqlite3;

namespace rsam::gateway {

// A stored request together with what is known about its responses.
struct StoredEntry {
  RequestRecord record;  // body left empty
  bool has_response = false;
  std::optional<ResponseOutcome> latest_outcome;
};

// Durable request/response ledger on local disk (SQLite, WAL journal).
//
// Every public call is atomic. complete() writes the response and the
// request's new lifecycle in one transaction so a crash never leaves a
// SUCCEEDED record without its body.
class Store {
 public:
  // Opens or creates <dir>/rsam.db. Throws RsamError(kStoreCorrupt) when the
  // file exists but is not a usable ledger.
  explicit Store(const std::filesystem::path& dir);
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  std::optional<RequestRecord> find(std::string_view base_key) const;
  void upsert(const RequestRecord& record);
  // Writes everything but the body, digest and content type of an existing
  // record. Throws RsamError(kNotFound).
  void update(const RequestRecord& record);
  void complete(const RequestRecord& record, const ResponseRecord& response);
  // Drops every response of a key; used when a deleted key is reused.
  void purge_responses(std::string_view base_key);

  std::optional<ResponseRecord> latest_succeeded(std::string_view base_key) const;
  std::optional<ResponseRecord> latest_response(std::string_view base_key) const;
  std::size_t response_count(std::string_view base_key) const;

  // Live (non-DELETED) records, newest first, optionally for one device.
  std::vector<StoredEntry> list(const std::optional<std::string>& device_id) const;

  // Records left FORWARDED. complete() moves a record out of FORWARDED in the
  // same transaction that stores its response, so outside an in-flight
  // request these are exactly the crash-window records.
  std::vector<std::string> doubt_window_keys() const;

 private:
  void exec(const char* sql) const;
  void insert_response(const ResponseRecord& response);
  void write_request(const RequestRecord& record);
  bool update_request(const RequestRecord& record);

  void checkpoint_loop(std::stop_token stop, std::string file);

  mutable std::mutex mu_;
  sqlite3* db_ = nullptr;
  std::mutex wake_mu_;
  std::condition_variable_any wake_;
  std::jthread checkpointer_;
};

}  // namespace rsam::gateway
