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

#include <gtest/gtest.h>

#include <fstream>

#include "rsam/core/error.h"
#include "support/temp_dir.h"

namespace rsam::gateway {
namespace {

using core::Lifecycle;
using testing::TempDir;

RequestRecord make_record(std::string key, std::string device, EpochMs created,
                          Lifecycle state = Lifecycle::kReceived) {
  RequestRecord r;
  r.base_key = std::move(key);
  r.device_id = std::move(device);
  r.method = core::HttpMethod::kPost;
  r.target_path = "/feeds/posts";
  r.body = std::string("a\0b", 3);
  r.body_digest = core::sha256(r.body);
  r.content_type = "application/json";
  r.lifecycle = state;
  r.created_at = created;
  return r;
}

ResponseRecord make_response(std::string key, ResponseOutcome outcome, EpochMs at) {
  ResponseRecord r;
  r.base_key = std::move(key);
  r.status_code = outcome == ResponseOutcome::kSuccess ? 200 : 500;
  r.body = "body@" + std::to_string(at);
  r.content_type = "text/plain";
  r.outcome = outcome;
  r.received_at = at;
  return r;
}

TEST(StoreTest, UpsertAndFindRoundTrip) {
  TempDir dir;
  Store store(dir.path());
  EXPECT_FALSE(store.find("k"));
  auto rec = make_record("k", "devA", 10);
  rec.forwarded_at = 11;
  store.upsert(rec);
  EXPECT_EQ(store.find("k"), rec);
  rec.lifecycle = Lifecycle::kForwarded;
  rec.trial_count = 3;
  store.upsert(rec);
  EXPECT_EQ(store.find("k"), rec);
}

TEST(StoreTest, UpdateAndCompleteKeepTheBody) {
  TempDir dir;
  Store store(dir.path());
  auto rec = make_record("k", "devA", 10);
  rec.body = std::string(300 * 1024, '\x7f');
  rec.body_digest = core::sha256(rec.body);
  store.upsert(rec);
  rec.lifecycle = Lifecycle::kForwarded;
  rec.forwarded_at = 12;
  store.update(rec);
  EXPECT_EQ(store.find("k"), rec);
  rec.lifecycle = Lifecycle::kSucceeded;
  rec.completed_at = 13;
  store.complete(rec, make_response("k", ResponseOutcome::kSuccess, 13));
  EXPECT_EQ(store.find("k"), rec);
  EXPECT_THROW(store.update(make_record("missing", "devA", 1)), RsamError);
}

TEST(StoreTest, LatestSucceededPicksMaxReceivedAt) {
  TempDir dir;
  Store store(dir.path());
  EXPECT_FALSE(store.latest_succeeded("k"));  // empty store

  auto rec = make_record("k", "devA", 1, Lifecycle::kForwarded);
  store.complete(rec, make_response("k", ResponseOutcome::kFailure, 3));
  EXPECT_FALSE(store.latest_succeeded("k"));  // failures only

  store.complete(rec, make_response("k", ResponseOutcome::kSuccess, 9));
  store.complete(rec, make_response("k", ResponseOutcome::kSuccess, 5));
  auto latest = store.latest_succeeded("k");
  ASSERT_TRUE(latest);
  EXPECT_EQ(latest->received_at, 9);
  EXPECT_EQ(latest->body, "body@9");
  EXPECT_EQ(store.response_count("k"), 3u);
  EXPECT_EQ(store.latest_response("k")->received_at, 9);

  store.purge_responses("k");
  EXPECT_EQ(store.response_count("k"), 0u);
}

TEST(StoreTest, ListSortsFiltersAndHidesDeleted) {
  TempDir dir;
  Store store(dir.path());
  EXPECT_TRUE(store.list(std::nullopt).empty());
  store.upsert(make_record("a1", "devA", 1));
  store.upsert(make_record("a2", "devA", 3));
  store.upsert(make_record("a3", "devA", 2));
  store.upsert(make_record("b1", "devB", 4));
  store.upsert(make_record("gone", "devA", 5, Lifecycle::kDeleted));

  auto all = store.list(std::nullopt);
  ASSERT_EQ(all.size(), 4u);
  EXPECT_EQ(all[0].record.base_key, "b1");
  EXPECT_TRUE(all[0].record.body.empty());

  auto dev_a = store.list(std::string("devA"));
  ASSERT_EQ(dev_a.size(), 3u);
  EXPECT_EQ(dev_a[0].record.base_key, "a2");
  EXPECT_EQ(dev_a[1].record.base_key, "a3");
  EXPECT_EQ(dev_a[2].record.base_key, "a1");
}

TEST(StoreTest, SurvivesReopen) {
  TempDir dir;
  auto rec = make_record("k", "devA", 1, Lifecycle::kForwarded);
  {
    Store store(dir.path());
    store.upsert(make_record("w", "devA", 2, Lifecycle::kForwarded));
    rec.lifecycle = Lifecycle::kSucceeded;
    store.complete(rec, make_response("k", ResponseOutcome::kSuccess, 7));
  }
  Store reopened(dir.path());
  EXPECT_EQ(reopened.find("k"), rec);
  EXPECT_EQ(reopened.latest_succeeded("k")->body, "body@7");
  EXPECT_EQ(reopened.doubt_window_keys(), std::vector<std::string>{"w"});
}

TEST(StoreTest, GarbageFileIsCorrupt) {
  TempDir dir;
  {
    std::ofstream out(dir.path() / "rsam.db");
    out << std::string(8192, 'x');
  }
  try {
    Store store(dir.path());
    FAIL() << "expected StoreCorrupt";
  } catch (const RsamError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStoreCorrupt);
  }
}

}  // namespace
}  // namespace rsam::gateway
