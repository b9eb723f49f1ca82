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

#include <optional>
#include <string>
#include <vector>

#include "ladon/adversary.hpp"
#include "ladon/crypto.hpp"
#include "ladon/epoch.hpp"
#include "ladon/messages.hpp"
#include "ladon/trace.hpp"
#include "ladon/types.hpp"

namespace ladon {

enum class Protocol : uint8_t {
  LadonPBFT,
  LadonOpt,
  LadonHotStuff,
  BaselinePredetermined,
};

const char* to_string(Protocol p);
std::optional<Protocol> parse_protocol(const std::string& s);

struct ClusterConfig {
  int n = 4;
  int f = 1;
  int m = 4;
  Protocol protocol = Protocol::LadonPBFT;
  int32_t rank_keys = 64;  // K
  std::size_t batch_size = 4096;
  SimTime base_interval = 250 * kMillisecond;
  SimTime view_change_timeout = 10 * kSecond;
  bool allow_excess_faults = false;

  std::size_t quorum() const { return static_cast<std::size_t>(2 * f + 1); }
  bool baseline() const { return protocol == Protocol::BaselinePredetermined; }
  RankMode rank_mode() const {
    return protocol == Protocol::LadonOpt ? RankMode::Opt : RankMode::Plain;
  }
  ReplicaId leader_of(InstanceIndex i, View v) const {
    return static_cast<ReplicaId>((static_cast<int64_t>(i) + v) % n);
  }
};

enum class TimerKind : uint8_t { Propose, RoundTimeout };

// Replica services used by consensus instances. The simulator implements it
// per replica; unit tests provide recording fakes.
class InstanceHost {
 public:
  virtual ~InstanceHost() = default;

  virtual ReplicaId self() const = 0;
  virtual const ClusterConfig& cluster() const = 0;
  virtual const EpochConfig& epoch() const = 0;
  virtual SimTime now() const = 0;
  virtual const SignatureScheme& signatures() const = 0;
  virtual const Behavior& behavior() const = 0;
  virtual bool is_byzantine(ReplicaId r) const = 0;

  virtual const CurRank& cur_rank() const = 0;
  // No-op unless rank is higher; the caller has verified the proof.
  virtual void raise_cur_rank(Rank rank, const CertPtr& qc) = 0;

  virtual void send(ReplicaId to, MessagePtr msg) = 0;
  virtual void broadcast(MessagePtr msg) = 0;  // includes self
  virtual void set_timer(TimerKind kind, InstanceIndex index, SimTime at,
                         uint64_t token) = 0;

  virtual std::vector<TxId> cut_batch(InstanceIndex index) = 0;
  virtual void reserve_txs(const std::vector<TxId>& txs) = 0;
  virtual void release_txs(const std::vector<TxId>& txs) = 0;

  virtual void on_partial_commit(const Block& block) = 0;
  virtual void on_leader_change(InstanceIndex index, ReplicaId leader) = 0;

  // False once the run is draining past the final epoch (or, for the
  // baseline, past the load cutoff).
  virtual bool proposals_allowed() const = 0;
  // Time this replica locally completed the previous epoch.
  virtual SimTime epoch_gen_time() const = 0;

  virtual void record(TraceRecord rec) = 0;
};

class ConsensusInstance {
 public:
  virtual ~ConsensusInstance() = default;
  virtual InstanceIndex index() const = 0;
  virtual View view() const = 0;
  virtual void start_epoch() = 0;
  virtual void on_message(const MessagePtr& msg) = 0;
  virtual void on_timer(TimerKind kind, uint64_t token) = 0;
};

}  // namespace ladon
