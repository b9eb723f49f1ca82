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
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ladon/instance_host.hpp"
#include "ladon/rank_engine.hpp"

namespace ladon {

// Node identity over everything a vote commits to.
NodeId node_id(Epoch epoch, InstanceIndex index, View view, int64_t height,
               NodeId parent, const Block& block, bool dummy);

NodePtr make_genesis(Epoch epoch, InstanceIndex index, Rank floor_rank);

// Fingerprint signed by a vote for `node`; a QC over it proves the node's rank.
Fingerprint vote_fingerprint(const ChainNode& node, InstanceIndex index);

// One chained-HotStuff instance at one replica. Rank reports ride on votes
// and the leader attaches them to its next Generic message.
class HotStuffInstance final : public ConsensusInstance {
 public:
  HotStuffInstance(InstanceIndex index, InstanceHost& host);

  InstanceIndex index() const override { return index_; }
  View view() const override { return view_; }
  ReplicaId leader() const;
  bool is_leader() const;
  bool stopped() const { return stopped_; }
  bool view_changing() const { return vc_target_ > view_; }
  int64_t committed_height() const;
  NodePtr locked() const { return locked_; }
  NodePtr high() const { return high_; }

  void start_epoch() override;
  void on_message(const MessagePtr& msg) override;
  void on_timer(TimerKind kind, uint64_t token) override;

  void handle_generic(const MessagePtr& msg);
  void handle_vote(const MessagePtr& msg);
  void handle_new_view(const MessagePtr& msg);
  void handle_timeout();

  // True iff `node` has `ancestor` on its parent path (or is it).
  bool extends(const NodePtr& node, const NodePtr& ancestor) const;

 private:
  struct VoteEntry {
    SignatureShare share;
    RankMessage report;
  };

  NodePtr find(NodeId id) const;
  RankMessage own_report(int64_t height) const;
  void try_propose();
  void propose(const NodePtr& parent, const CertPtr& qc,
               std::vector<RankMessage> reports,
               std::vector<RankMessage> pool);
  bool process_generic(const MessagePtr& msg, const NodePtr& parent);
  void update_chain(const NodePtr& node);
  void commit_through(const NodePtr& node, const CertPtr& proof);
  void vote(const NodePtr& node);
  bool ancestry_known(const NodePtr& node) const;
  void try_install();
  void reserve_branch_txs();
  void arm_round_timer();
  void reject(const Message& msg, const char* reason);
  // Dummy nodes since the last real node on the path, and that node.
  std::pair<int, NodePtr> trailing_dummies(const NodePtr& node) const;

  InstanceIndex index_;
  InstanceHost& host_;

  View view_ = 0;
  View vc_target_ = 0;
  NodePtr genesis_;
  std::unordered_map<NodeId, NodePtr> nodes_;
  std::multimap<NodeId, MessagePtr> orphans_;
  NodePtr high_;
  CertPtr high_qc_;
  NodePtr locked_;
  NodePtr committed_;
  std::pair<View, int64_t> last_voted_{-1, 0};

  // Leader side.
  NodePtr tip_;       // node the next proposal extends
  CertPtr tip_qc_;    // set when tip_ came from a view change
  std::vector<RankMessage> tip_reports_;
  std::map<NodeId, std::vector<VoteEntry>> votes_;
  std::map<View, std::map<ReplicaId, MessagePtr>> new_views_;
  std::optional<View> pending_install_;
  bool stopped_ = false;
  Rank last_proposed_rank_ = -1;
  std::vector<std::vector<TxId>> reserved_;
  std::optional<SimTime> last_proposal_;
  SimTime collect_start_ = 0;
  SimTime propose_timer_at_ = -1;
  uint64_t propose_token_ = 0;
  uint64_t round_token_ = 0;
  int consecutive_failures_ = 0;
};

}  // namespace ladon
