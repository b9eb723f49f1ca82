// Copyright 2026 The Ladon Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "ladon/epoch.hpp"

namespace ladon {
namespace {

TEST(RankRange, Examples) {
  EXPECT_EQ(rank_range(0, 64), (std::pair<Rank, Rank>{0, 63}));
  EXPECT_EQ(rank_range(1, 64), (std::pair<Rank, Rank>{64, 127}));
  for (Epoch e = 0; e < 5; ++e) EXPECT_EQ(rank_range(e, 1), (std::pair<Rank, Rank>{e, e}));
}

TEST(RankRange, VariableLengthsTileTheIntegers) {
  const EpochLengthFn len = [](Epoch e) { return 3 + (e % 4) * 5; };
  Rank expect_min = 0;
  int64_t cumulative = 0;
  for (Epoch e = 0; e < 20; ++e) {
    const auto [lo, hi] = rank_range(e, len);
    cumulative += len(e);
    EXPECT_EQ(lo, expect_min);
    EXPECT_EQ(hi, cumulative - 1);
    EXPECT_EQ(hi - lo + 1, len(e));
    expect_min = hi + 1;
  }
  EXPECT_THROW(rank_range(-1, len), std::invalid_argument);
}

TEST(InitEpoch, LeadersAndBuckets) {
  const EpochConfig c = init_epoch(0, 4, 4, 64);
  EXPECT_EQ(c.leaders, (std::vector<ReplicaId>{0, 1, 2, 3}));
  EXPECT_EQ(c.min_rank, 0);
  EXPECT_EQ(c.max_rank, 63);
  EXPECT_EQ(c.floor_rank(), -1);

  const EpochConfig one = init_epoch(0, 4, 1, 64);
  EXPECT_EQ(one.leaders.size(), 1u);
  EXPECT_EQ(one.bucket_assignment, (std::vector<InstanceIndex>{0}));

  const EpochConfig e1 = init_epoch(1, 4, 4, 64);
  for (int b = 0; b < 4; ++b) EXPECT_EQ(e1.bucket_assignment[b], (b + 1) % 4);
  EXPECT_THROW(init_epoch(0, 4, 5, 64), std::invalid_argument);
}

TEST(Buckets, AssignmentIsDeterministicAndRotates) {
  for (TxId tx = 1; tx < 200; ++tx) {
    const int b = assign_bucket(tx, 4);
    EXPECT_EQ(b, assign_bucket(tx, 4));
    EXPECT_GE(b, 0);
    EXPECT_LT(b, 4);
  }
  EXPECT_EQ(rotate_buckets(0, 4, 4)[2], 2);
  EXPECT_EQ(rotate_buckets(1, 4, 4)[2], 3);
  // A bucket visits every instance within m epochs, so one censoring leader
  // cannot hold it forever.
  std::set<InstanceIndex> owners;
  for (Epoch e = 0; e < 4; ++e) owners.insert(rotate_buckets(e, 4, 4)[2]);
  EXPECT_EQ(owners.size(), 4u);
}

TEST(CutBatch, FifoAndDisjoint) {
  BucketQueue q;
  for (TxId t = 1; t <= 5000; ++t) q.push_back(t);
  const auto a = cut_batch(q, 4096);
  ASSERT_EQ(a.size(), 4096u);
  EXPECT_EQ(a.front(), 1u);
  EXPECT_EQ(a.back(), 4096u);
  const auto b = cut_batch(q, 4096);
  EXPECT_EQ(b.size(), 904u);
  EXPECT_EQ(b.front(), 4097u);
  BucketQueue empty;
  EXPECT_TRUE(cut_batch(empty, 10).empty());
  BucketQueue s{1, 2, 3, 4};
  EXPECT_EQ(cut_batch(s, 10, [](TxId t) { return t % 2 == 0; }), (std::vector<TxId>{1, 3}));
}

class PacemakerTest : public ::testing::Test {
 protected:
  SimulatedSignatures scheme{5, 4};
  EpochPacemaker pm{4, 1, 4, 4};

  void complete_instances(int count) {
    for (InstanceIndex i = 0; i < count; ++i) {
      for (Round r = 1; r <= 4; ++r) pm.record_commit(i, r, r - 1);
    }
  }

  std::optional<StableCheckpoint> vote(ReplicaId r, const CheckpointSummary& s) {
    Fingerprint fp;
    fp.type = MsgType::Checkpoint;
    fp.epoch = pm.epoch();
    fp.digest = summary_digest(s);
    return pm.on_checkpoint(scheme, r, pm.epoch(), s, scheme.sign(r, fp));
  }
};

TEST_F(PacemakerTest, AdvancesWithAllInstancesAndStableCheckpoint) {
  complete_instances(4);
  ASSERT_TRUE(pm.local_complete());
  auto cp = pm.make_checkpoint();
  ASSERT_TRUE(cp);
  EXPECT_FALSE(pm.make_checkpoint());
  EXPECT_FALSE(vote(0, cp->summary));
  EXPECT_FALSE(vote(1, cp->summary));
  EXPECT_FALSE(pm.maybe_advance());
  EXPECT_TRUE(vote(2, cp->summary));
  EXPECT_EQ(pm.stable()->cert.size(), 3u);
  pm.set_leader(2, 3);
  EXPECT_TRUE(pm.maybe_advance());
  EXPECT_EQ(pm.epoch(), 1);
  EXPECT_EQ(pm.config().min_rank, 4);
  EXPECT_EQ(pm.config().leaders[2], 3);
  EXPECT_FALSE(pm.local_complete());
}

TEST_F(PacemakerTest, ThreeOfFourInstancesIsNotEnough) {
  complete_instances(3);
  EXPECT_FALSE(pm.local_complete());
  EXPECT_FALSE(pm.make_checkpoint());
  EXPECT_FALSE(pm.maybe_advance());
}

TEST_F(PacemakerTest, MismatchedSummariesDoNotFormQuorum) {
  complete_instances(4);
  const auto good = pm.make_checkpoint()->summary;
  auto other = good;
  other[0].first += 1;
  EXPECT_FALSE(vote(0, good));
  EXPECT_FALSE(vote(1, other));
  EXPECT_FALSE(vote(2, good));
  EXPECT_FALSE(vote(2, good));  // repeated sender
  EXPECT_TRUE(vote(3, good));
}

TEST_F(PacemakerTest, ContiguityRequiredForCompletion) {
  for (InstanceIndex i = 1; i < 4; ++i) {
    for (Round r = 1; r <= 4; ++r) pm.record_commit(i, r, r - 1);
  }
  pm.record_commit(0, 4, 3);
  pm.record_commit(0, 2, 1);
  pm.record_commit(0, 3, 2);
  EXPECT_FALSE(pm.instance_complete(0));
  pm.record_commit(0, 1, 0);
  EXPECT_TRUE(pm.instance_complete(0));
  EXPECT_TRUE(pm.local_complete());
}

}  // namespace
}  // namespace ladon
