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

#include <gtest/gtest.h>

#include "support/temp_dir.h"

namespace rsam::client {
namespace {

using testing::TempDir;

PreparedRequest req(const std::string& device, core::EpochMs t, std::string body = "b") {
  PreparedRequest r;
  r.service = "post";
  r.method = core::HttpMethod::kPost;
  r.target = "/feeds/posts";
  r.id = core::generate_client_id(device, t, r.target, 1, false);
  r.body = std::move(body);
  r.content_type = "application/octet-stream";
  return r;
}

TEST(LocalStoreTest, QueueIsOrderedAndDurable) {
  TempDir dir;
  std::string binary("\0\x01\xff\n\"", 5);
  {
    LocalStore store(dir.path());
    store.enqueue({req("d", 3), 30, "x"});
    store.enqueue({req("d", 1, binary), 10, "y"});
    store.enqueue({req("d", 2), 20, "z"});
    // Same base key again: replaced in place, keeps its slot.
    auto again = req("d", 1, binary);
    again.id = again.id.next_trial();
    store.enqueue({again, 99, "later"});
  }
  LocalStore reopened(dir.path());
  auto q = reopened.queue();
  ASSERT_EQ(q.size(), 3u);
  EXPECT_EQ(q[0].request.id.sent_at, 1);
  EXPECT_EQ(q[0].request.id.trial, 2);
  EXPECT_EQ(q[0].request.body, binary);
  EXPECT_EQ(q[0].enqueued_at, 10);
  EXPECT_EQ(q[0].last_error, "later");
  EXPECT_EQ(q[1].request.id.sent_at, 2);
  EXPECT_EQ(q[2].request.id.sent_at, 3);

  auto removed = reopened.remove(q[1].request.id.base_key());
  ASSERT_TRUE(removed);
  EXPECT_EQ(*removed, q[1]);
  EXPECT_FALSE(reopened.remove("missing"));
  EXPECT_EQ(reopened.queue().size(), 2u);
}

TEST(LocalStoreTest, OutcomeLogIsCappedFifo) {
  TempDir dir;
  {
    LocalStore store(dir.path(), 5);
    for (int i = 0; i < 12; ++i) {
      core::RsamOutcome o{core::OutcomeState::kSucceeded, std::string(1, char(i)), "", "k", 200};
      store.log({req("d", i), o, i});
    }
    auto log = store.outcomes();
    ASSERT_EQ(log.size(), 5u);
    EXPECT_EQ(log.front().at, 7);
    EXPECT_EQ(log.back().at, 11);
  }
  LocalStore reopened(dir.path(), 5);
  EXPECT_EQ(reopened.outcomes().size(), 5u);
  auto last = reopened.last_outcome(req("d", 9).id.base_key());
  ASSERT_TRUE(last);
  EXPECT_EQ(last->outcome.payload, std::string(1, char(9)));
  EXPECT_FALSE(reopened.last_outcome(req("d", 2).id.base_key()));
}

}  // namespace
}  // namespace rsam::client
