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

#include "rsam/core/lifecycle.h"

#include <gtest/gtest.h>

#include <random>

#include "rsam/core/error.h"

namespace rsam::core {
namespace {

TEST(LifecycleTest, TableRows) {
  EXPECT_EQ(transition(Lifecycle::kReceived, LifecycleEvent::kForward),
            Lifecycle::kForwarded);
  EXPECT_EQ(transition(Lifecycle::kForwarded, LifecycleEvent::kUpstreamOk),
            Lifecycle::kSucceeded);
  EXPECT_EQ(transition(Lifecycle::kForwarded, LifecycleEvent::kUpstreamErr),
            Lifecycle::kFailed);
  EXPECT_EQ(transition(Lifecycle::kFailed, LifecycleEvent::kRetry),
            Lifecycle::kForwarded);
  EXPECT_EQ(transition(Lifecycle::kSucceeded, LifecycleEvent::kDelete),
            Lifecycle::kDeleted);
}

TEST(LifecycleTest, IllegalPairsThrow) {
  try {
    transition(Lifecycle::kSucceeded, LifecycleEvent::kRetry);
    FAIL() << "expected IllegalTransition";
  } catch (const RsamError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIllegalTransition);
  }
  EXPECT_FALSE(try_transition(Lifecycle::kReceived, LifecycleEvent::kUpstreamOk));
  EXPECT_FALSE(try_transition(Lifecycle::kSucceeded, LifecycleEvent::kForward));
}

TEST(LifecycleTest, DeletedIsAbsorbing) {
  for (LifecycleEvent e : kAllLifecycleEvents) {
    EXPECT_FALSE(try_transition(Lifecycle::kDeleted, e)) << to_string(e);
  }
  for (Lifecycle s : kAllLifecycles) {
    if (s != Lifecycle::kDeleted) {
      EXPECT_EQ(try_transition(s, LifecycleEvent::kDelete), Lifecycle::kDeleted);
    }
  }
}

TEST(LifecycleTest, SucceededOnlyReachedFromForwarded) {
  for (Lifecycle s : kAllLifecycles) {
    for (LifecycleEvent e : kAllLifecycleEvents) {
      if (try_transition(s, e) == Lifecycle::kSucceeded) {
        EXPECT_EQ(s, Lifecycle::kForwarded);
      }
    }
  }
}

TEST(LifecycleProperty, RandomWalksRespectTable) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pick(0, 4);
  for (int walk = 0; walk < 2000; ++walk) {
    Lifecycle state = Lifecycle::kReceived;
    bool seen_forwarded = false;
    for (int step = 0; step < 12; ++step) {
      auto next = try_transition(state, kAllLifecycleEvents[pick(rng)]);
      if (!next) continue;
      if (*next == Lifecycle::kSucceeded) {
        ASSERT_TRUE(seen_forwarded);
      }
      if (state == Lifecycle::kDeleted) FAIL() << "left DELETED";
      seen_forwarded = seen_forwarded || *next == Lifecycle::kForwarded;
      state = *next;
    }
  }
}

TEST(LifecycleTest, NamesRoundTrip) {
  for (Lifecycle s : kAllLifecycles) {
    EXPECT_EQ(parse_lifecycle(to_string(s)), s);
  }
  EXPECT_FALSE(parse_lifecycle("IN_DOUBT_WINDOW"));
}

}  // namespace
}  // namespace rsam::core
