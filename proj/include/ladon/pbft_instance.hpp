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

#pragma once

#include <map>
#include <utility>
#include <optional>
#include <set>
#include <vector>

#include "ladon/instance_host.hpp"
#include "ladon/rank_engine.hpp"

namespace ladon {

struct NewViewPlan {
  Round min_committed = 0;
  Round max_committed = 0;
  std::vector<PreparedCert> reproposals;
  Round next_round = 1;
};

// Derives the NewView content from a quorum of ViewChange messages. Invalid
// prepared certificates are ignored.
NewViewPlan plan_new_view(const std::vector<MessagePtr>& view_changes,
                          const SignatureScheme& scheme, std::size_t quorum);

// One PBFT consensus instance at one replica, with ranks piggybacked on the
// commit phase. The baseline protocol uses the same machine without ranks.
class PbftInstance final : public ConsensusInstance {
 public:
  PbftInstance(InstanceIndex index, InstanceHost& host);

  InstanceIndex index() const override { return index_; }
  View view() const override { return view_; }
  ReplicaId leader() const;
  bool is_leader() const;
  bool stopped() const { return stopped_; }
  bool view_changing() const { return vc_target_ > view_; }
  Round next_round() const { return next_round_; }
  Round committed_prefix() const { return committed_prefix_; }
  std::optional<Block> committed_block(Round round) const;

  void start_epoch() override;
  void on_message(const MessagePtr& msg) override;
  void on_timer(TimerKind kind, uint64_t token) override;

  // Proposes next_round() from the given rank messages; the first entry is
  // the leader's own. Returns the broadcast PrePrepare, or null if proposing
  // is not allowed.
  MessagePtr leader_propose(std::vector<RankMessage> rank_set);
  void handle_pre_prepare(const MessagePtr& msg);
  void handle_prepare(const MessagePtr& msg);
  void handle_commit(const MessagePtr& msg);
  void handle_rank(const MessagePtr& msg);
  void handle_timeout();
  void handle_view_change(const MessagePtr& msg);
  void handle_new_view(const MessagePtr& msg);

  // Rank message for the commit phase of `round` (or the round-1 form when
  // round == 0) built from the current CurRank.
  RankMessage own_rank_message(Round round) const;

  // Foreign rank messages held for the given round in the current view.
  std::size_t rank_messages_for(Round round) const;

 private:
  struct VoteKey {
    View view = 0;
    Digest digest = 0;
    Rank rank = 0;
    auto operator<=>(const VoteKey&) const = default;
  };

  struct Slot {
    // Keyed by (digest, rank): the digest covers only the transactions, so
    // empty blocks proposed at different ranks share it.
    std::map<std::pair<Digest, Rank>, Block> contents;
    View accepted_view = -1;
    Block accepted;
    std::map<VoteKey, std::vector<SignatureShare>> prepares;
    std::map<VoteKey, std::vector<SignatureShare>> commits;
    View prepared_view = -1;
    std::optional<PreparedCert> cert;
    bool committed = false;
    Block committed_block;
  };

  Slot& slot(Round round) { return slots_[round]; }
  const Block* known_block(Round round) const;
  bool has_pending() const;
  RankContext rank_context() const;
  MessagePtr make_vote(MsgType type, Round round, const Block& block) const;
  void try_propose();
  void check_prepared(Round round);
  void check_committed(Round round);
  void commit(Round round, const Block& block,
              const std::vector<SignatureShare>& shares);
  void arm_round_timer();
  void disarm_round_timer();
  void reject(const Message& msg, const char* reason);
  void install_view(View view, const NewViewPlan& plan);
  void maybe_send_install_rank();
  void replay_future();
  bool add_share(std::vector<SignatureShare>& shares, const Message& msg);

  InstanceIndex index_;
  InstanceHost& host_;

  View view_ = 0;
  View vc_target_ = 0;
  Round next_round_ = 1;
  Round committed_prefix_ = 0;
  Round pruned_below_ = 0;
  Round nv_wait_commit_ = 0;
  bool stopped_ = false;
  Rank last_proposed_rank_ = -1;

  std::map<Round, Slot> slots_;
  std::map<Round, std::vector<RankMessage>> rank_msgs_;
  std::map<Round, std::vector<TxId>> inflight_;
  std::map<View, std::map<ReplicaId, MessagePtr>> view_changes_;
  std::set<View> new_view_sent_;
  std::vector<MessagePtr> future_;
  std::optional<Round> install_rank_round_;
  std::vector<RankMessage> byz_pool_;

  std::optional<SimTime> last_proposal_;
  SimTime collect_start_ = 0;
  SimTime propose_timer_at_ = -1;
  uint64_t propose_token_ = 0;
  uint64_t round_token_ = 0;
  int consecutive_failures_ = 0;
};

}  // namespace ladon
