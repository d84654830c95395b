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

#include "rsam/gateway/store.h"

#include <sqlite3.h>

#include <chrono>

#include "rsam/core/error.h"

namespace rsam::gateway {
namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS requests (
  base_key     TEXT PRIMARY KEY,
  device_id    TEXT NOT NULL,
  method       TEXT NOT NULL,
  target_path  TEXT NOT NULL,
  body_digest  TEXT NOT NULL,
  content_type TEXT NOT NULL,
  lifecycle    TEXT NOT NULL,
  trial_count  INTEGER NOT NULL,
  forced       INTEGER NOT NULL,
  created_at   INTEGER NOT NULL,
  forwarded_at INTEGER,
  completed_at INTEGER
);
CREATE TABLE IF NOT EXISTS request_bodies (
  base_key     TEXT PRIMARY KEY,
  body         BLOB NOT NULL
);
CREATE TABLE IF NOT EXISTS responses (
  id           INTEGER PRIMARY KEY AUTOINCREMENT,
  base_key     TEXT NOT NULL,
  status_code  INTEGER NOT NULL,
  body         BLOB NOT NULL,
  content_type TEXT NOT NULL,
  outcome      TEXT NOT NULL,
  received_at  INTEGER NOT NULL,
  trial        INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS responses_by_key ON responses(base_key, received_at);
CREATE INDEX IF NOT EXISTS requests_by_device ON requests(device_id, created_at);
)sql";

[[noreturn]] void corrupt(const std::string& what) {
  throw RsamError(ErrorCode::kStoreCorrupt, "store: " + what);
}

// Thin RAII wrapper over a prepared statement.
class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      fail("prepare");
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int i, std::string_view text) {
    check(sqlite3_bind_text(stmt_, i, text.data(), static_cast<int>(text.size()),
                            SQLITE_TRANSIENT));
    return *this;
  }
  Statement& bind_blob(int i, std::string_view bytes) {
    // Callers keep the bytes alive until the statement is done.
    check(sqlite3_bind_blob64(stmt_, i, bytes.data(), bytes.size(), SQLITE_STATIC));
    return *this;
  }
  Statement& bind(int i, std::int64_t value) {
    check(sqlite3_bind_int64(stmt_, i, value));
    return *this;
  }
  Statement& bind(int i, const std::optional<std::int64_t>& value) {
    check(value ? sqlite3_bind_int64(stmt_, i, *value) : sqlite3_bind_null(stmt_, i));
    return *this;
  }

  // True while a row is available.
  bool step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    fail("step");
  }

  std::string text(int col) const {
    auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, col));
    return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col)))
             : std::string{};
  }
  std::string blob(int col) const {
    const void* p = sqlite3_column_blob(stmt_, col);
    auto n = static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col));
    return p ? std::string(static_cast<const char*>(p), n) : std::string{};
  }
  std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }
  std::optional<std::int64_t> maybe_integer(int col) const {
    if (sqlite3_column_type(stmt_, col) == SQLITE_NULL) return std::nullopt;
    return integer(col);
  }

 private:
  void check(int rc) {
    if (rc != SQLITE_OK) fail("bind");
  }
  [[noreturn]] void fail(const char* stage) {
    int rc = sqlite3_errcode(db_);
    std::string msg = std::string(stage) + ": " + sqlite3_errmsg(db_);
    if (rc == SQLITE_CORRUPT || rc == SQLITE_NOTADB) corrupt(msg);
    throw RsamError(ErrorCode::kIo, "store: " + msg);
  }

  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

constexpr const char* kRequestColumns =
    "r.base_key, r.device_id, r.method, r.target_path, r.body_digest, b.body, "
    "r.content_type, r.lifecycle, r.trial_count, r.forced, r.created_at, "
    "r.forwarded_at, r.completed_at";

// Same shape with the body column blanked, for listings.
constexpr const char* kSummaryColumns =
    "r.base_key, r.device_id, r.method, r.target_path, r.body_digest, x'', "
    "r.content_type, r.lifecycle, r.trial_count, r.forced, r.created_at, "
    "r.forwarded_at, r.completed_at";

RequestRecord read_request(const Statement& st, bool with_body) {
  RequestRecord r;
  r.base_key = st.text(0);
  r.device_id = st.text(1);
  auto method = core::parse_method(st.text(2));
  auto digest = core::digest_from_hex(st.text(4));
  auto lifecycle = core::parse_lifecycle(st.text(7));
  if (!method || !digest || !lifecycle) corrupt("bad request row for " + r.base_key);
  r.method = *method;
  r.target_path = st.text(3);
  r.body_digest = *digest;
  if (with_body) r.body = st.blob(5);
  r.content_type = st.text(6);
  r.lifecycle = *lifecycle;
  r.trial_count = static_cast<int>(st.integer(8));
  r.forced = st.integer(9) != 0;
  r.created_at = st.integer(10);
  r.forwarded_at = st.maybe_integer(11);
  r.completed_at = st.maybe_integer(12);
  return r;
}

ResponseRecord read_response(const Statement& st) {
  ResponseRecord r;
  r.base_key = st.text(0);
  r.status_code = static_cast<int>(st.integer(1));
  r.body = st.blob(2);
  r.content_type = st.text(3);
  std::string outcome = st.text(4);
  if (outcome == "SUCCESS") {
    r.outcome = ResponseOutcome::kSuccess;
  } else if (outcome == "FAILURE") {
    r.outcome = ResponseOutcome::kFailure;
  } else {
    corrupt("bad response outcome for " + r.base_key);
  }
  r.received_at = st.integer(5);
  r.trial = static_cast<int>(st.integer(6));
  return r;
}

}  // namespace

std::string_view to_string(ResponseOutcome outcome) {
  return outcome == ResponseOutcome::kSuccess ? "SUCCESS" : "FAILURE";
}

Store::Store(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw RsamError(ErrorCode::kIo, "store: cannot create " + dir.string() + ": " +
                                        ec.message());
  }
  auto file = (dir / "rsam.db").string();
  if (sqlite3_open_v2(file.c_str(), &db_,
                      SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE |
                          SQLITE_OPEN_FULLMUTEX,
                      nullptr) != SQLITE_OK) {
    std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    db_ = nullptr;
    corrupt("cannot open " + file + ": " + msg);
  }
  sqlite3_busy_timeout(db_, 5000);
  try {
    // WAL with synchronous=NORMAL survives a killed process; only an OS crash
    // can lose the last transactions.
    // Page size only takes effect on a fresh file; large bodies span fewer pages.
    exec("PRAGMA page_size=65536;");
    exec("PRAGMA journal_mode=WAL;");
    exec("PRAGMA synchronous=NORMAL;");
    // Checkpoints run on a background connection instead of inside commits.
    exec("PRAGMA wal_autocheckpoint=0;");
    Statement check(db_, "PRAGMA quick_check;");
    if (!check.step() || check.text(0) != "ok") corrupt("quick_check failed for " + file);
    exec(kSchema);
  } catch (const RsamError& e) {
    sqlite3_close(db_);
    db_ = nullptr;
    if (e.code() == ErrorCode::kStoreCorrupt) throw;
    corrupt(e.what());
  }
  checkpointer_ = std::jthread(
      [this, file](std::stop_token stop) { checkpoint_loop(stop, file); });
}

Store::~Store() {
  checkpointer_.request_stop();
  wake_.notify_all();
  if (checkpointer_.joinable()) checkpointer_.join();
  sqlite3_close(db_);
}

void Store::checkpoint_loop(std::stop_token stop, std::string file) {
  sqlite3* db = nullptr;
  if (sqlite3_open_v2(file.c_str(), &db, SQLITE_OPEN_READWRITE, nullptr) != SQLITE_OK) {
    sqlite3_close(db);
    return;
  }
  sqlite3_busy_timeout(db, 1000);
  std::unique_lock lock(wake_mu_);
  while (!stop.stop_requested()) {
    wake_.wait_for(lock, stop, std::chrono::milliseconds(250), [] { return false; });
    lock.unlock();
    sqlite3_wal_checkpoint_v2(db, nullptr, SQLITE_CHECKPOINT_PASSIVE, nullptr, nullptr);
    lock.lock();
  }
  sqlite3_wal_checkpoint_v2(db, nullptr, SQLITE_CHECKPOINT_TRUNCATE, nullptr, nullptr);
  sqlite3_close(db);
}


void Store::exec(const char* sql) const {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    int rc = sqlite3_errcode(db_);
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    if (rc == SQLITE_CORRUPT || rc == SQLITE_NOTADB) corrupt(msg);
    throw RsamError(ErrorCode::kIo, "store: " + msg);
  }
}

std::optional<RequestRecord> Store::find(std::string_view base_key) const {
  std::lock_guard lock(mu_);
  Statement st(db_, (std::string("SELECT ") + kRequestColumns +
                     " FROM requests r LEFT JOIN request_bodies b ON b.base_key = r.base_key"
                     " WHERE r.base_key = ?1")
                        .c_str());
  st.bind(1, base_key);
  if (!st.step()) return std::nullopt;
  return read_request(st, /*with_body=*/true);
}

void Store::write_request(const RequestRecord& r) {
  Statement st(db_,
               "INSERT OR REPLACE INTO requests (base_key, device_id, method, "
               "target_path, body_digest, content_type, lifecycle, trial_count, "
               "forced, created_at, forwarded_at, completed_at) "
               "VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9, ?10, ?11, ?12)");
  st.bind(1, r.base_key)
      .bind(2, r.device_id)
      .bind(3, core::to_string(r.method))
      .bind(4, r.target_path)
      .bind(5, core::to_hex(r.body_digest))
      .bind(6, r.content_type)
      .bind(7, core::to_string(r.lifecycle))
      .bind(8, std::int64_t{r.trial_count})
      .bind(9, std::int64_t{r.forced ? 1 : 0})
      .bind(10, r.created_at)
      .bind(11, r.forwarded_at)
      .bind(12, r.completed_at);
  st.step();
  Statement body(db_,
                 "INSERT OR REPLACE INTO request_bodies (base_key, body) VALUES (?1, ?2)");
  body.bind(1, r.base_key).bind_blob(2, r.body);
  body.step();
}

bool Store::update_request(const RequestRecord& r) {
  Statement st(db_,
               "UPDATE requests SET lifecycle = ?2, trial_count = ?3, forced = ?4, "
               "forwarded_at = ?5, completed_at = ?6 WHERE base_key = ?1");
  st.bind(1, r.base_key)
      .bind(2, core::to_string(r.lifecycle))
      .bind(3, std::int64_t{r.trial_count})
      .bind(4, std::int64_t{r.forced ? 1 : 0})
      .bind(5, r.forwarded_at)
      .bind(6, r.completed_at);
  st.step();
  return sqlite3_changes(db_) == 1;
}

void Store::insert_response(const ResponseRecord& r) {
  Statement st(db_,
               "INSERT INTO responses (base_key, status_code, body, content_type, "
               "outcome, received_at, trial) VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7)");
  st.bind(1, r.base_key)
      .bind(2, std::int64_t{r.status_code})
      .bind_blob(3, r.body)
      .bind(4, r.content_type)
      .bind(5, to_string(r.outcome))
      .bind(6, r.received_at)
      .bind(7, std::int64_t{r.trial});
  st.step();
}

void Store::upsert(const RequestRecord& record) {
  std::lock_guard lock(mu_);
  exec("BEGIN IMMEDIATE;");
  try {
    write_request(record);
    exec("COMMIT;");
  } catch (...) {
    sqlite3_exec(db_, "ROLLBACK;", nullptr, nullptr, nullptr);
    throw;
  }
}

void Store::update(const RequestRecord& record) {
  std::lock_guard lock(mu_);
  if (!update_request(record)) {
    throw RsamError(ErrorCode::kNotFound, "store: no request " + record.base_key);
  }
}

void Store::complete(const RequestRecord& record, const ResponseRecord& response) {
  std::lock_guard lock(mu_);
  exec("BEGIN IMMEDIATE;");
  try {
    insert_response(response);
    if (!update_request(record)) write_request(record);
    exec("COMMIT;");
  } catch (...) {
    sqlite3_exec(db_, "ROLLBACK;", nullptr, nullptr, nullptr);
    throw;
  }
}

void Store::purge_responses(std::string_view base_key) {
  std::lock_guard lock(mu_);
  Statement st(db_, "DELETE FROM responses WHERE base_key = ?1");
  st.bind(1, base_key);
  st.step();
}

std::optional<ResponseRecord> Store::latest_succeeded(std::string_view base_key) const {
  std::lock_guard lock(mu_);
  Statement st(db_,
               "SELECT base_key, status_code, body, content_type, outcome, "
               "received_at, trial FROM responses "
               "WHERE base_key = ?1 AND outcome = 'SUCCESS' "
               "ORDER BY received_at DESC, id DESC LIMIT 1");
  st.bind(1, base_key);
  if (!st.step()) return std::nullopt;
  return read_response(st);
}

std::optional<ResponseRecord> Store::latest_response(std::string_view base_key) const {
  std::lock_guard lock(mu_);
  Statement st(db_,
               "SELECT base_key, status_code, body, content_type, outcome, "
               "received_at, trial FROM responses "
               "WHERE base_key = ?1 ORDER BY received_at DESC, id DESC LIMIT 1");
  st.bind(1, base_key);
  if (!st.step()) return std::nullopt;
  return read_response(st);
}

std::size_t Store::response_count(std::string_view base_key) const {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT COUNT(*) FROM responses WHERE base_key = ?1");
  st.bind(1, base_key);
  st.step();
  return static_cast<std::size_t>(st.integer(0));
}

std::vector<StoredEntry> Store::list(const std::optional<std::string>& device_id) const {
  std::lock_guard lock(mu_);
  std::string sql = std::string("SELECT ") + kSummaryColumns +
                    ", (SELECT outcome FROM responses s WHERE s.base_key = r.base_key "
                    "ORDER BY received_at DESC, id DESC LIMIT 1) "
                    "FROM requests r WHERE lifecycle != 'DELETED'";
  if (device_id) sql += " AND device_id = ?1";
  sql += " ORDER BY created_at DESC, base_key ASC";
  Statement st(db_, sql.c_str());
  if (device_id) st.bind(1, *device_id);

  std::vector<StoredEntry> out;
  while (st.step()) {
    StoredEntry e;
    e.record = read_request(st, /*with_body=*/false);
    std::string latest = st.text(13);
    e.has_response = !latest.empty();
    if (latest == "SUCCESS") e.latest_outcome = ResponseOutcome::kSuccess;
    if (latest == "FAILURE") e.latest_outcome = ResponseOutcome::kFailure;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::string> Store::doubt_window_keys() const {
  std::lock_guard lock(mu_);
  Statement st(db_,
               "SELECT base_key FROM requests WHERE lifecycle = 'FORWARDED' "
               "ORDER BY created_at");
  std::vector<std::string> out;
  while (st.step()) out.push_back(st.text(0));
  return out;
}

}  // namespace rsam::gateway
