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

#include <algorithm>
#include <random>

#include "ladon/global_ordering.hpp"

namespace ladon {
namespace {

Block blk(InstanceIndex index, Round round, Rank rank, Epoch epoch = 0) {
  return make_block({static_cast<TxId>(1000 * index + round)}, index, round, rank, epoch);
}

std::vector<BlockId> ids(const std::vector<Block>& blocks) {
  std::vector<BlockId> out;
  for (const auto& b : blocks) out.push_back(b.id());
  return out;
}

TEST(FindLowestBlock, Examples) {
  const std::vector<Block> s = {blk(0, 3, 3), blk(1, 2, 2), blk(2, 2, 4)};
  EXPECT_EQ(find_lowest_block(s)->id(), (BlockId{0, 1, 2}));
  EXPECT_FALSE(find_lowest_block({}));
  const std::vector<Block> one = {blk(0, 1, 0)};
  EXPECT_EQ(find_lowest_block(one)->id(), (BlockId{0, 0, 1}));
}

TEST(ComputeBar, FromLastPartiallyConfirmed) {
  OrderingState st = make_ordering_state(3);
  st.last_partially_confirmed = {blk(0, 3, 3), blk(1, 2, 2), blk(2, 2, 4)};
  EXPECT_EQ(compute_bar(st), (OrderKey{3, 1}));

  OrderingState single = make_ordering_state(1);
  single.last_partially_confirmed = {blk(0, 5, 7)};
  EXPECT_EQ(compute_bar(single), (OrderKey{8, 0}));
}

TEST(ComputeBar, EmptyInstanceContributesFloor) {
  OrderingState st = make_ordering_state(2);
  st.last_partially_confirmed[0] = blk(0, 1, 5);
  EXPECT_EQ(compute_bar(st), (OrderKey{0, 1}));
  // No epoch-0 block of instance 1 (rank >= 0) can precede (0,1) except (0,0)
  // keys, which belong to instance 0.
  for (Rank r = 0; r < 64; ++r) EXPECT_FALSE(precedes(OrderKey{r, 1}, OrderKey{0, 1}));
}

TEST(OnPartialCommit, WorkedExample) {
  OrderingState st = make_ordering_state(3);
  for (const Block& b : {blk(0, 1, 0), blk(0, 2, 1), blk(0, 3, 3), blk(1, 1, 1), blk(2, 1, 1)}) {
    EXPECT_TRUE(on_partial_commit(st, b).accepted);
  }
  EXPECT_EQ(ids(st.g_out),
            (std::vector<BlockId>{{0, 0, 1}, {0, 0, 2}, {0, 1, 1}, {0, 2, 1}}));
  const Block t1[] = {blk(1, 2, 2), blk(2, 2, 4)};
  const auto out = on_partial_commit(st, std::span<const Block>(t1));
  EXPECT_EQ(ids(out.confirmed), (std::vector<BlockId>{{0, 1, 2}, {0, 0, 3}}));
  EXPECT_EQ(st.bar, (OrderKey{3, 1}));
  ASSERT_EQ(st.unconfirmed.size(), 1u);
  EXPECT_EQ(st.unconfirmed.begin()->second, (BlockId{0, 2, 2}));
}

TEST(OnPartialCommit, NothingBelowFloorBar) {
  OrderingState st = make_ordering_state(2);
  // Instance 0 still contributes (-1,0), so the bar stays at (0,0).
  const auto out = on_partial_commit(st, blk(1, 1, 0));
  EXPECT_TRUE(out.accepted);
  EXPECT_TRUE(out.confirmed.empty());
  EXPECT_EQ(st.bar, (OrderKey{0, 0}));
}

TEST(OnPartialCommit, DuplicateRejectedWithoutChange) {
  OrderingState st = make_ordering_state(1);
  on_partial_commit(st, blk(0, 1, 0));
  const auto before_bar = st.bar;
  const auto before_out = st.g_out.size();
  const auto out = on_partial_commit(st, blk(0, 1, 0));
  EXPECT_FALSE(out.accepted);
  EXPECT_EQ(st.bar, before_bar);
  EXPECT_EQ(st.g_out.size(), before_out);
}

TEST(OnPartialCommit, ContiguousPrefixOnly) {
  OrderingState st = make_ordering_state(2);
  on_partial_commit(st, blk(1, 1, 0));
  // Round 2 of instance 0 arrives before round 1: instance 0 stays empty.
  on_partial_commit(st, blk(0, 2, 1));
  EXPECT_FALSE(st.last_partially_confirmed[0]);
  EXPECT_TRUE(st.g_out.empty());
  on_partial_commit(st, blk(0, 1, 0));
  EXPECT_EQ(st.last_partially_confirmed[0]->round, 2);
  EXPECT_EQ(ids(st.g_out), (std::vector<BlockId>{{0, 0, 1}, {0, 1, 1}, {0, 0, 2}}));
}

// Random interleavings of a fully delivered run against a brute-force sort.
TEST(OnPartialCommit, RandomInterleavingsMatchSortedOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Block> all;
    for (InstanceIndex i = 0; i < 3; ++i) {
      Rank rank = -1;
      for (Round r = 1; r <= 3; ++r) {
        rank += 1 + static_cast<Rank>(rng() % 3);
        all.push_back(blk(i, r, rank));
      }
    }
    std::vector<Block> order = all;
    std::shuffle(order.begin(), order.end(), rng);
    OrderingState st = make_ordering_state(3);
    std::vector<OrderKey> bars;
    for (const auto& b : order) {
      const auto out = on_partial_commit(st, b);
      for (const auto& c : out.confirmed) EXPECT_TRUE(precedes(order_key(c), st.bar));
      if (!bars.empty()) EXPECT_FALSE(precedes(st.bar, bars.back()));
      bars.push_back(st.bar);
    }
    std::sort(all.begin(), all.end(), [](const Block& a, const Block& b) {
      return precedes(order_key(a), order_key(b));
    });
    // Everything strictly below the final bar is confirmed, in sorted order.
    std::vector<BlockId> expected;
    for (const auto& b : all) {
      if (precedes(order_key(b), st.bar)) expected.push_back(b.id());
    }
    EXPECT_EQ(ids(st.g_out), expected);
    EXPECT_GE(st.g_out.size(), 1u);
  }
}

TEST(BeginEpoch, KeepsUnconfirmedAndResetsPrefix) {
  OrderingState st = make_ordering_state(2, 0, 0);
  on_partial_commit(st, blk(0, 1, 3));
  on_partial_commit(st, blk(1, 1, 3));
  const auto confirmed = st.g_out.size();
  begin_epoch(st, 1, 4);
  EXPECT_FALSE(st.last_partially_confirmed[0]);
  EXPECT_EQ(st.g_out.size(), confirmed);
  // Instance 1 has nothing in epoch 1 yet and contributes (3,1).
  on_partial_commit(st, blk(0, 1, 4, 1));
  EXPECT_EQ(st.bar, (OrderKey{4, 1}));
  EXPECT_EQ(st.g_out.size(), 3u);
  on_partial_commit(st, blk(1, 1, 4, 1));
  EXPECT_EQ(st.g_out.size(), 4u);
  EXPECT_EQ(st.g_out.back().id(), (BlockId{1, 1, 1}));
}

TEST(PredeterminedSn, Examples) {
  std::vector<uint64_t> got;
  for (uint64_t seq = 0; seq < 4; ++seq) got.push_back(predetermined_sn(1, seq, 3));
  EXPECT_EQ(got, (std::vector<uint64_t>{1, 4, 7, 10}));
  EXPECT_EQ(predetermined_sn(0, 0, 3), 0u);
  EXPECT_EQ(predetermined_sn(0, 17, 1), 17u);
}

TEST(Predetermined, BlocksOnHoles) {
  PredeterminedState st;
  st.m = 2;
  EXPECT_TRUE(on_partial_commit(st, blk(1, 1, 1)).confirmed.empty());
  EXPECT_TRUE(on_partial_commit(st, blk(1, 2, 3)).confirmed.empty());
  const auto out = on_partial_commit(st, blk(0, 1, 0));
  EXPECT_EQ(ids(out.confirmed), (std::vector<BlockId>{{0, 0, 1}, {0, 1, 1}}));
  EXPECT_FALSE(on_partial_commit(st, blk(0, 1, 0)).accepted);
  EXPECT_EQ(ids(on_partial_commit(st, blk(0, 2, 2)).confirmed),
            (std::vector<BlockId>{{0, 0, 2}, {0, 1, 2}}));
}

}  // namespace
}  // namespace ladon
