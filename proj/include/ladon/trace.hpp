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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "ladon/types.hpp"

namespace ladon {

namespace trace {

struct Config {
  std::string protocol;
  int n = 0;
  int f = 0;
  int m = 0;
  int64_t epoch_length = 0;
  SimTime base_interval = 0;
  SimTime duration = 0;
  SimTime load_cutoff = 0;
  SimTime warmup = 0;
  uint64_t seed = 0;
  std::vector<ReplicaId> honest;  // neither Byzantine nor crashing
  std::vector<ReplicaId> byzantine;
};

struct ClientSubmit {
  SimTime time = 0;
  TxId first = 0;
  uint64_t count = 0;
};

struct Propose {
  SimTime time = 0;
  ReplicaId replica = 0;
  Epoch epoch = 0;
  InstanceIndex index = 0;
  View view = 0;
  Round round = 0;
  Digest digest = 0;
  Rank rank = 0;
  Rank rank_m = -1;
  Rank plain_rank_m = -1;  // max of the reporters' true CurRank values
  SimTime gen_time = 0;
  uint64_t tx_count = 0;
  uint64_t rank_units = 0;
  uint64_t kept = 0;
  bool dummy = false;
  bool reproposal = false;
  bool byzantine = false;
  std::vector<Rank> collected;  // Byzantine leaders: whole pool
  std::vector<Rank> honest;     // Byzantine leaders: honest part of the pool
};

struct Reject {
  SimTime time = 0;
  ReplicaId replica = 0;
  InstanceIndex index = 0;
  View view = 0;
  Round round = 0;
  std::string reason;
};

struct PartialCommit {
  SimTime time = 0;
  ReplicaId replica = 0;
  Epoch epoch = 0;
  InstanceIndex index = 0;
  Round round = 0;
  Rank rank = 0;
  Digest digest = 0;
  uint64_t tx_count = 0;
};

struct BlockContent {
  Epoch epoch = 0;
  InstanceIndex index = 0;
  Round round = 0;
  std::vector<TxId> txs;
};

struct GlobalConfirm {
  SimTime time = 0;
  ReplicaId replica = 0;
  uint64_t sn = 0;
  Epoch epoch = 0;
  InstanceIndex index = 0;
  Round round = 0;
  Rank rank = 0;
  OrderKey bar;
};

struct RankUpdate {
  SimTime time = 0;
  ReplicaId replica = 0;
  Rank rank = 0;
};

struct ViewChange {
  SimTime time = 0;
  ReplicaId replica = 0;
  InstanceIndex index = 0;
  View new_view = 0;
};

struct NewView {
  SimTime time = 0;
  ReplicaId replica = 0;
  InstanceIndex index = 0;
  View view = 0;
  Round next_round = 0;
  uint64_t reproposals = 0;
};

struct EpochChange {
  SimTime time = 0;
  ReplicaId replica = 0;
  Epoch epoch = 0;
};

struct Checkpoint {
  SimTime time = 0;
  ReplicaId replica = 0;
  Epoch epoch = 0;
  bool stable = false;
};

struct MessageEvent {
  SimTime send_time = 0;
  SimTime deliver_time = 0;
  ReplicaId src = 0;
  ReplicaId dst = 0;
  MsgType type = MsgType::Prepare;
  InstanceIndex index = 0;
  Round round = 0;
  uint64_t bytes = 0;
  uint64_t rank_units = 0;
  uint64_t auth_ops = 0;
};

// The chain that justified a HotStuff commit: b <- b1 <- b2 <- b3, b3 carries
// the QC for b2.
struct HsCommitRule {
  SimTime time = 0;
  ReplicaId replica = 0;
  Epoch epoch = 0;
  InstanceIndex index = 0;
  int64_t committed_height = 0;
  std::array<int64_t, 4> heights{};
  bool consecutive_parents = false;
  bool certified = false;
};

struct Crash {
  SimTime time = 0;
  ReplicaId replica = 0;
};

struct Violation {
  SimTime time = 0;
  uint64_t event_index = 0;
  std::string invariant;
  std::string detail;
};

}  // namespace trace

using TraceRecord =
    std::variant<trace::Config, trace::ClientSubmit, trace::Propose,
                 trace::Reject, trace::PartialCommit, trace::BlockContent,
                 trace::GlobalConfirm, trace::RankUpdate, trace::ViewChange,
                 trace::NewView, trace::EpochChange, trace::Checkpoint,
                 trace::MessageEvent, trace::HsCommitRule, trace::Crash,
                 trace::Violation>;

struct MessageTotals {
  uint64_t count = 0;
  uint64_t bytes = 0;
  uint64_t rank_units = 0;
  uint64_t auth_ops = 0;
};

constexpr std::size_t kMsgTypeCount = 9;

struct Trace {
  std::vector<TraceRecord> records;
  std::array<MessageTotals, kMsgTypeCount> message_totals{};
  uint64_t events_processed = 0;

  template <typename T>
  std::vector<const T*> all() const {
    std::vector<const T*> out;
    for (const auto& r : records) {
      if (const auto* p = std::get_if<T>(&r)) out.push_back(p);
    }
    return out;
  }
  const trace::Config& config() const;
};

// One record per line, stable field order.
std::string to_line(const TraceRecord& record);
void write_trace(std::ostream& os, const Trace& trace);

}  // namespace ladon
