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

#include "rsam/core/decision.h"

#include <gtest/gtest.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rsam::core {
namespace {

// Oracle: one predicate per decision, written straight from the rule list a
// reviewer would check by hand. For every input exactly one must hold.
struct OracleRow {
  Decision decision;
  bool (*holds)(const DecisionInput&);
};

bool live(const DecisionInput& in) {
  return in.stored.has_value() && *in.stored != Lifecycle::kDeleted;
}
bool forced(const DecisionInput& in) {
  return in.request_forced || in.descriptor_forced;
}
bool in_crash_window_or_inconsistent(const DecisionInput& in) {
  return *in.stored == Lifecycle::kForwarded || *in.stored == Lifecycle::kSucceeded;
}

const OracleRow kOracle[] = {
    {Decision::kForwardFirstTime, [](const DecisionInput& in) { return !live(in); }},
    {Decision::kRejectInvalid,
     [](const DecisionInput& in) { return live(in) && !in.body_digest_matches; }},
    {Decision::kServeCached,
     [](const DecisionInput& in) {
       return live(in) && in.body_digest_matches && !forced(in) &&
              in.has_succeeded_response;
     }},
    {Decision::kDoubt,
     [](const DecisionInput& in) {
       return live(in) && in.body_digest_matches && !forced(in) &&
              !in.has_succeeded_response && in_crash_window_or_inconsistent(in) &&
              !in.idempotent;
     }},
    {Decision::kForwardRetry,
     [](const DecisionInput& in) {
       if (!live(in) || !in.body_digest_matches) return false;
       if (forced(in)) return true;
       if (in.has_succeeded_response) return false;
       if (*in.stored == Lifecycle::kReceived || *in.stored == Lifecycle::kFailed) {
         return true;
       }
       return in_crash_window_or_inconsistent(in) && in.idempotent;
     }},
};

std::vector<DecisionInput> whole_domain() {
  std::vector<std::optional<Lifecycle>> stored{std::nullopt};
  for (Lifecycle s : kAllLifecycles) stored.emplace_back(s);

  std::vector<DecisionInput> out;
  for (const auto& s : stored) {
    for (int bits = 0; bits < 32; ++bits) {
      out.push_back(DecisionInput{s, (bits & 1) != 0, (bits & 2) != 0,
                                  (bits & 4) != 0, (bits & 8) != 0,
                                  (bits & 16) != 0});
    }
  }
  return out;
}

std::string describe(const DecisionInput& in) {
  return std::string("stored=") +
         (in.stored ? std::string(to_string(*in.stored)) : "absent") +
         " success=" + std::to_string(in.has_succeeded_response) +
         " req_forced=" + std::to_string(in.request_forced) +
         " desc_forced=" + std::to_string(in.descriptor_forced) +
         " idempotent=" + std::to_string(in.idempotent) +
         " digest_ok=" + std::to_string(in.body_digest_matches);
}

TEST(DecideTest, OracleIsExhaustiveAndSingleValued) {
  for (const auto& in : whole_domain()) {
    int matches = 0;
    for (const auto& row : kOracle) matches += row.holds(in) ? 1 : 0;
    EXPECT_EQ(matches, 1) << describe(in);
  }
}

TEST(DecideTest, MatchesOracleOnWholeDomain) {
  auto domain = whole_domain();
  ASSERT_EQ(domain.size(), 6u * 32u);
  std::map<Decision, int> histogram;
  for (const auto& in : domain) {
    Decision got = decide(in);
    ++histogram[got];
    for (const auto& row : kOracle) {
      if (row.holds(in)) {
        EXPECT_EQ(got, row.decision) << describe(in);
      }
    }
  }
  // Every decision is reachable.
  EXPECT_EQ(histogram.size(), 5u);
}

TEST(DecideTest, FirstTimeWhenNothingStored) {
  ClientRequestId id = generate_client_id("devA", 1, "/x", 1, false);
  EXPECT_EQ(decide(std::nullopt, false, id, false, false, true),
            Decision::kForwardFirstTime);
  EXPECT_EQ(decide(std::nullopt, false, id, false, true, true),
            Decision::kForwardFirstTime);
}

TEST(DecideTest, ServesCachedAfterSuccess) {
  ClientRequestId id = generate_client_id("devA", 1, "/x", 2, false);
  EXPECT_EQ(decide(Lifecycle::kSucceeded, true, id, false, true, true),
            Decision::kServeCached);
}

TEST(DecideTest, DoubtForNonIdempotentCrashWindow) {
  ClientRequestId id = generate_client_id("devA", 1, "/x", 2, false);
  EXPECT_EQ(decide(Lifecycle::kForwarded, false, id, false, false, true),
            Decision::kDoubt);
}

TEST(DecideTest, DeletedRecordIsFirstTime) {
  ClientRequestId id = generate_client_id("devA", 1, "/x", 3, false);
  EXPECT_EQ(decide(Lifecycle::kDeleted, false, id, false, false, true),
            Decision::kForwardFirstTime);
}

TEST(DecideTest, NeverCachedWhenForcedNeverDoubtWhenIdempotent) {
  for (const auto& in : whole_domain()) {
    Decision d = decide(in);
    if (in.request_forced || in.descriptor_forced) {
      EXPECT_NE(d, Decision::kServeCached) << describe(in);
    }
    if (in.idempotent) {
      EXPECT_NE(d, Decision::kDoubt) << describe(in);
    }
  }
}

TEST(DecideTest, Deterministic) {
  for (const auto& in : whole_domain()) {
    EXPECT_EQ(decide(in), decide(in));
  }
}

}  // namespace
}  // namespace rsam::core
