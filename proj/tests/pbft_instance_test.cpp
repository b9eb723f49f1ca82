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

#include "ladon/pbft_instance.hpp"
#include "support/builders.hpp"
#include "support/fake_host.hpp"

namespace ladon {
namespace {

using testing::commit_qc;
using testing::FakeHost;
using testing::MiniCluster;
using testing::plain_report;
using testing::pre_prepare;

MessagePtr vote(const SignatureScheme& s, MsgType type, ReplicaId sender, const Message& pp,
                View view = -1) {
  auto m = std::make_shared<Message>();
  m->type = type;
  m->sender = sender;
  m->epoch = pp.epoch;
  m->index = pp.index;
  m->view = view < 0 ? pp.view : view;
  m->round = pp.round;
  m->digest = pp.digest;
  m->rank = pp.rank;
  m->sig = s.sign(sender, m->fingerprint());
  return m;
}

using Cluster = MiniCluster<PbftInstance>;

TEST(PbftInstance, FirstRoundFromFloorRank) {
  Cluster c(4, 1, Protocol::LadonPBFT, 64);
  c.start();
  const auto pps = c.host(0).of(MsgType::PrePrepare);
  ASSERT_EQ(pps.size(), 1u);
  EXPECT_EQ(pps[0].to, -1);
  EXPECT_EQ(pps[0].msg->rank, 0);
  EXPECT_EQ(pps[0].msg->round, 1);
  EXPECT_TRUE(c.host(1).of(MsgType::PrePrepare).empty());
}

TEST(PbftInstance, HappyPathCommitsRoundsWithIncreasingRanks) {
  Cluster c(4, 1, Protocol::LadonPBFT, 64);
  c.start();
  c.pump();
  for (ReplicaId r = 0; r < 4; ++r) {
    ASSERT_EQ(c.host(r).commits.size(), 1u);
    EXPECT_EQ(c.host(r).commits[0].rank, 0);
    EXPECT_EQ(c.host(r).cur_rank().rank, 0);
  }
  for (int round = 2; round <= 5; ++round) {
    c.fire_propose_timers(round * 10 * kMillisecond);
    c.pump();
  }
  for (ReplicaId r = 0; r < 4; ++r) {
    ASSERT_EQ(c.host(r).commits.size(), 5u);
    for (std::size_t k = 1; k < 5; ++k) {
      EXPECT_GT(c.host(r).commits[k].rank, c.host(r).commits[k - 1].rank);
      EXPECT_EQ(c.host(r).commits[k].round, static_cast<Round>(k + 1));
    }
  }
  // Plain mode carries 2f+1 reports from round 2 on.
  const auto props = c.host(0).recorded<trace::Propose>();
  ASSERT_EQ(props.size(), 5u);
  EXPECT_EQ(props[0].rank_units, 1u);
  for (std::size_t k = 1; k < props.size(); ++k) EXPECT_EQ(props[k].rank_units, 3u);
}

TEST(PbftInstance, OptModeCarriesOneUnit) {
  Cluster c(4, 1, Protocol::LadonOpt, 64);
  c.start();
  c.pump();
  for (int round = 2; round <= 4; ++round) {
    c.fire_propose_timers(round * 10 * kMillisecond);
    c.pump();
  }
  const auto props = c.host(0).recorded<trace::Propose>();
  ASSERT_EQ(props.size(), 4u);
  for (std::size_t k = 1; k < props.size(); ++k) {
    EXPECT_EQ(props[k].rank_units, 1u);
    EXPECT_EQ(props[k].rank_m, props[k].plain_rank_m);
  }
  EXPECT_EQ(c.host(3).commits.size(), 4u);
}

TEST(PbftInstance, LeaderWithCollectedRanksProposesMaxPlusOne) {
  Cluster c(4, 1, Protocol::LadonPBFT, 64, 1);
  c.start();
  c.pump();
  ASSERT_EQ(c.host(2).commits.size(), 1u);
  std::vector<RankMessage> set;
  const Rank ranks[] = {3, 2, 2, 2};
  for (ReplicaId r = 0; r < 4; ++r) set.push_back(plain_report(*c.scheme, r, ranks[r], 0, 1, 1));
  const MessagePtr pp = c.inst(1).leader_propose(set);
  ASSERT_TRUE(pp);
  EXPECT_EQ(pp->rank, 4);
  EXPECT_EQ(pp->round, 2);
  c.pump();
  for (ReplicaId r = 0; r < 4; ++r) {
    ASSERT_EQ(c.host(r).commits.size(), 2u);
    EXPECT_EQ(c.host(r).commits[1].rank, 4);
  }
}

TEST(PbftInstance, StopsAfterMaxRank) {
  Cluster c(4, 1, Protocol::LadonPBFT, 3);
  c.start();
  c.pump();
  for (int round = 2; round <= 8; ++round) {
    c.fire_propose_timers(round * 10 * kMillisecond);
    c.pump();
  }
  const auto props = c.host(0).recorded<trace::Propose>();
  ASSERT_EQ(props.size(), 3u);
  EXPECT_EQ(props.back().rank, 2);
  EXPECT_TRUE(c.inst(0).stopped());
  // The round timer is disarmed once the max-rank block commits.
  EXPECT_EQ(c.host(1).commits.back().rank, 2);
}

class BackupTest : public ::testing::Test {
 protected:
  std::shared_ptr<SimulatedSignatures> scheme = std::make_shared<SimulatedSignatures>(4, 4);
  ClusterConfig cluster = [] {
    ClusterConfig c;
    c.n = 4;
    c.f = 1;
    c.m = 4;
    c.view_change_timeout = kSecond;
    return c;
  }();
  EpochConfig epoch = init_epoch(0, 4, 4, 64);
  FakeHost host{2, cluster, epoch, scheme};
  PbftInstance inst{0, host};

  // Round-1 proposal of leader 0 whose own report is `leader_rank`.
  Message proposal(Rank leader_rank) {
    return pre_prepare(*scheme, epoch, 0, 0, 1, 0, {plain_report(*scheme, 0, leader_rank, 0, 0)});
  }

  void deliver(const Message& m) { inst.on_message(std::make_shared<Message>(m)); }
  void deliver(MessagePtr m) { inst.on_message(std::move(m)); }
};

TEST_F(BackupTest, ValidProposalGetsPrepare) {
  inst.start_epoch();
  const Message pp = proposal(3);
  ASSERT_EQ(pp.rank, 4);
  deliver(pp);
  const auto prepares = host.of(MsgType::Prepare);
  ASSERT_EQ(prepares.size(), 1u);
  EXPECT_EQ(prepares[0].msg->rank, 4);
  EXPECT_EQ(prepares[0].msg->digest, pp.digest);
  EXPECT_EQ(prepares[0].msg->round, 1);
}

TEST_F(BackupTest, WrongRankDropped) {
  inst.start_epoch();
  Message pp = proposal(3);
  auto& body = std::get<PrePreparePayload>(pp.body);
  body.block = make_block({1, 2}, 0, 1, 5, 0);
  pp.rank = 5;
  pp.digest = body.block.digest;
  pp.sig = scheme->sign(0, pp.fingerprint());
  deliver(pp);
  EXPECT_TRUE(host.of(MsgType::Prepare).empty());
  ASSERT_EQ(host.recorded<trace::Reject>().size(), 1u);
}

TEST_F(BackupTest, ConflictingProposalForSameSlotDropped) {
  inst.start_epoch();
  deliver(proposal(3));
  Message other = proposal(3);
  auto& body = std::get<PrePreparePayload>(other.body);
  body.block = make_block({9}, 0, 1, 4, 0);
  other.digest = body.block.digest;
  other.sig = scheme->sign(0, other.fingerprint());
  deliver(other);
  EXPECT_EQ(host.of(MsgType::Prepare).size(), 1u);
}

TEST_F(BackupTest, NonLeaderProposalDropped) {
  inst.start_epoch();
  deliver(pre_prepare(*scheme, epoch, 1, 0, 1, 0, {plain_report(*scheme, 1, 3, 0, 0)}));
  EXPECT_TRUE(host.of(MsgType::Prepare).empty());
}

TEST_F(BackupTest, PrepareQuorumRaisesCurRankAndReports) {
  host.set_cur(3, commit_qc(*scheme, 3));
  inst.start_epoch();
  const Message pp = proposal(3);
  deliver(pp);
  deliver(vote(*scheme, MsgType::Prepare, 0, pp));
  EXPECT_TRUE(host.of(MsgType::Commit).empty());
  deliver(vote(*scheme, MsgType::Prepare, 1, pp));
  EXPECT_TRUE(host.of(MsgType::Commit).empty());
  deliver(vote(*scheme, MsgType::Prepare, 2, pp));
  ASSERT_EQ(host.of(MsgType::Commit).size(), 1u);
  EXPECT_EQ(host.cur_rank().rank, 4);
  EXPECT_TRUE(host.cur_rank().qc);
  const auto ranks = host.of(MsgType::Rank);
  ASSERT_EQ(ranks.size(), 1u);
  EXPECT_EQ(ranks[0].to, 0);
  EXPECT_EQ(std::get<RankMessage>(ranks[0].msg->body).reported(), 4);
}

TEST_F(BackupTest, HigherCurRankIsReportedUnchanged) {
  host.set_cur(9, commit_qc(*scheme, 9));
  inst.start_epoch();
  const Message pp = proposal(3);
  deliver(pp);
  for (ReplicaId r = 0; r < 3; ++r) deliver(vote(*scheme, MsgType::Prepare, r, pp));
  ASSERT_EQ(host.of(MsgType::Commit).size(), 1u);
  EXPECT_EQ(host.cur_rank().rank, 9);
  EXPECT_EQ(std::get<RankMessage>(host.of(MsgType::Rank)[0].msg->body).reported(), 9);
}

TEST_F(BackupTest, CommitQuorumIsIdempotentAndViewMatched) {
  inst.start_epoch();
  const Message pp = proposal(3);
  deliver(pp);
  for (ReplicaId r = 0; r < 3; ++r) deliver(vote(*scheme, MsgType::Prepare, r, pp));
  deliver(vote(*scheme, MsgType::Commit, 0, pp));
  deliver(vote(*scheme, MsgType::Commit, 1, pp, 1));  // other view
  deliver(vote(*scheme, MsgType::Commit, 2, pp));
  EXPECT_TRUE(host.commits.empty());
  deliver(vote(*scheme, MsgType::Commit, 3, pp));
  ASSERT_EQ(host.commits.size(), 1u);
  EXPECT_EQ(host.commits[0].rank, 4);
  for (ReplicaId r = 0; r < 4; ++r) deliver(vote(*scheme, MsgType::Commit, r, pp));
  EXPECT_EQ(host.commits.size(), 1u);
  EXPECT_EQ(inst.committed_prefix(), 1);
}

TEST_F(BackupTest, TimeoutSendsViewChangeWithBackoff) {
  inst.start_epoch();
  ASSERT_FALSE(host.timers.empty());
  const auto first = host.timers.back();
  EXPECT_EQ(first.kind, TimerKind::RoundTimeout);
  EXPECT_EQ(first.at, kSecond);
  host.set_now(first.at);
  inst.on_timer(first.kind, first.token);
  const auto vcs = host.of(MsgType::ViewChange);
  ASSERT_EQ(vcs.size(), 1u);
  EXPECT_EQ(vcs[0].to, 1);
  EXPECT_EQ(vcs[0].msg->view, 1);
  const auto second = host.timers.back();
  EXPECT_EQ(second.at - first.at, 2 * kSecond);
  host.set_now(second.at);
  inst.on_timer(second.kind, second.token);
  const auto vcs2 = host.of(MsgType::ViewChange);
  ASSERT_EQ(vcs2.size(), 2u);
  EXPECT_EQ(vcs2[1].msg->view, 2);
  EXPECT_EQ(vcs2[1].to, 2);
  EXPECT_EQ(host.timers.back().at - second.at, 4 * kSecond);
  // A stale timer token does nothing.
  inst.on_timer(first.kind, first.token);
  EXPECT_EQ(host.of(MsgType::ViewChange).size(), 2u);
}

TEST_F(BackupTest, CommitStopsTimer) {
  inst.start_epoch();
  const auto armed = host.timers.back();
  const Message pp = proposal(3);
  deliver(pp);
  for (ReplicaId r = 0; r < 3; ++r) deliver(vote(*scheme, MsgType::Prepare, r, pp));
  for (ReplicaId r = 0; r < 3; ++r) deliver(vote(*scheme, MsgType::Commit, r, pp));
  ASSERT_EQ(host.commits.size(), 1u);
  host.set_now(armed.at);
  inst.on_timer(armed.kind, armed.token);
  EXPECT_TRUE(host.of(MsgType::ViewChange).empty());
}

TEST(PbftViewChange, CrashedLeaderReplaced) {
  Cluster c(4, 1, Protocol::LadonPBFT, 64);
  c.down.assign(4, false);
  c.down[0] = true;
  c.start();
  c.pump();
  for (ReplicaId r = 1; r < 4; ++r) {
    const auto t = c.round_timer(r);
    ASSERT_TRUE(t);
    c.host(r).set_now(t->at);
    c.inst(r).on_timer(t->kind, t->token);
  }
  c.pump();
  for (ReplicaId r = 1; r < 4; ++r) {
    EXPECT_EQ(c.inst(r).view(), 1);
    ASSERT_FALSE(c.host(r).commits.empty());
  }
  bool sent_new_view = false;
  for (const auto& s : c.log[1]) sent_new_view |= s.msg->type == MsgType::NewView;
  EXPECT_TRUE(sent_new_view);
  EXPECT_EQ(c.host(2).leaders.back(), 1);
}

TEST(PbftViewChange, EmptyBlockReproposedAtHigherRank) {
  Cluster c(4, 1, Protocol::LadonPBFT, 64);
  for (ReplicaId r = 0; r < 4; ++r) c.host(r).queue.clear();
  c.host(1).set_cur(3, testing::commit_qc(*c.scheme, 3, 3, 2));
  // Only replica 3 sees the view-0 proposal, an empty block at rank 0.
  c.drop = [](ReplicaId from, ReplicaId to, const Message& m) {
    return from == 0 && !(to == 3 && m.type == MsgType::PrePrepare);
  };
  c.start();
  c.pump();
  c.down.assign(4, false);
  c.down[0] = true;
  for (ReplicaId r = 1; r < 4; ++r) {
    const auto t = c.round_timer(r);
    ASSERT_TRUE(t);
    c.host(r).set_now(t->at);
    c.inst(r).on_timer(t->kind, t->token);
  }
  c.pump();
  for (ReplicaId r = 1; r < 4; ++r) {
    ASSERT_EQ(c.host(r).commits.size(), 1u) << "replica " << r;
    EXPECT_EQ(c.host(r).commits[0].rank, 4);
    EXPECT_EQ(c.host(r).commits[0].tx_count(), 0u);
  }
}

TEST(PbftViewChange, NewViewFromNonLeaderIgnored) {
  Cluster c(4, 1, Protocol::LadonPBFT, 64);
  c.start();
  auto nv = std::make_shared<Message>();
  nv->type = MsgType::NewView;
  nv->sender = 3;
  nv->view = 1;
  nv->body = NewViewPayload{};
  nv->sig = c.scheme->sign(3, nv->fingerprint());
  c.inst(2).on_message(nv);
  EXPECT_EQ(c.inst(2).view(), 0);
}

TEST(PbftViewChange, StaleViewChangesIgnored) {
  Cluster c(4, 1, Protocol::LadonPBFT, 64);
  c.start();
  for (ReplicaId r = 0; r < 4; ++r) {
    auto vc = std::make_shared<Message>();
    vc->type = MsgType::ViewChange;
    vc->sender = r;
    vc->view = 0;
    vc->body = ViewChangePayload{};
    vc->sig = c.scheme->sign(r, vc->fingerprint());
    c.inst(0).on_message(vc);
  }
  EXPECT_TRUE(c.host(0).of(MsgType::NewView).empty());
}

}  // namespace
}  // namespace ladon
