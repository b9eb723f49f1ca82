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

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "ladon/types.hpp"

namespace ladon {

enum class RankMode : uint8_t { Plain, Opt };

// <rank, v, n, _, i, curRank.rank> signed by sender. In opt mode `rank` holds
// the rank of the block whose commit phase produced the report and the signing
// key encodes the delta.
struct RankMessage {
  ReplicaId sender = 0;
  Epoch epoch = 0;
  View view = 0;
  Round round = 0;
  InstanceIndex index = 0;
  Rank rank = -1;
  RankMode mode = RankMode::Plain;
  int32_t key_index = 0;
  std::optional<Rank> explicit_rank;
  CertPtr qc;
  Signature sig = 0;
  SimTime sent_at = 0;

  // The CurRank value this message vouches for.
  Rank reported() const;
  Fingerprint fingerprint() const;
};

struct RankSet {
  RankMode mode = RankMode::Plain;
  std::vector<RankMessage> entries;  // plain mode
  // Opt mode: one aggregate over per-key rank messages, plus explicit ranks
  // for signers that used the overflow key.
  CertPtr aggregate;
  std::vector<std::pair<ReplicaId, Rank>> explicit_ranks;
  Rank round_rank = -1;

  std::size_t size() const;
  // Rank payload units carried on the wire.
  std::size_t units() const;
};

struct PrePreparePayload {
  Block block;
  RankSet rank_set;
  Rank rank_m = -1;
  CertPtr rank_qc;
};

struct PreparedCert {
  Block block;
  View view = 0;
  CertPtr qc;
};

struct ViewChangePayload {
  Round last_committed = 0;
  std::vector<PreparedCert> prepared;
  CurRank cur;
};

struct Message;
using MessagePtr = std::shared_ptr<const Message>;

struct NewViewPayload {
  std::vector<MessagePtr> view_changes;
  std::vector<PreparedCert> reproposals;
  Round next_round = 1;
};

struct CheckpointPayload {
  std::vector<std::pair<Round, Rank>> summary;  // per instance (round, rank)
};

using NodeId = uint64_t;

struct ChainNode {
  NodeId id = 0;
  NodeId parent = 0;
  int64_t height = 0;
  View view = 0;
  Block block;
  bool dummy = false;
  CertPtr justify;  // QC over the parent; null for the epoch genesis parent
};

using NodePtr = std::shared_ptr<const ChainNode>;

struct GenericPayload {
  NodePtr node;
  Rank rank_m = -1;
  CertPtr rank_qc;
  std::vector<RankMessage> vote_set;
};

struct VotePayload {
  NodeId node = 0;
  RankMessage report;
};

struct HsNewViewPayload {
  NodePtr high_node;  // node certified by high_qc (genesis if none)
  CertPtr high_qc;
  RankMessage report;
};

struct Message {
  MsgType type = MsgType::Prepare;
  ReplicaId sender = 0;
  Epoch epoch = 0;
  InstanceIndex index = 0;
  View view = 0;
  Round round = 0;
  Digest digest = 0;
  Rank rank = 0;
  Signature sig = 0;
  std::variant<std::monostate, PrePreparePayload, RankMessage,
               ViewChangePayload, NewViewPayload, CheckpointPayload,
               GenericPayload, VotePayload, HsNewViewPayload>
      body;

  Fingerprint fingerprint() const;
};

// Wire accounting used by the simulator and the metrics module.
struct WireCost {
  std::size_t bytes = 0;
  std::size_t rank_units = 0;
  std::size_t auth_ops = 0;  // signature verifications at the receiver
};

WireCost wire_cost(const Message& msg, uint32_t payload_size);

}  // namespace ladon
