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

#include <deque>
#include <functional>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ladon/crypto.hpp"
#include "ladon/messages.hpp"
#include "ladon/types.hpp"

namespace ladon {

using EpochLengthFn = std::function<int64_t(Epoch)>;

struct EpochConfig {
  Epoch epoch = 0;
  int64_t length = 64;
  Rank min_rank = 0;
  Rank max_rank = 63;
  std::vector<ReplicaId> leaders;             // instance -> replica
  std::vector<InstanceIndex> bucket_assignment;  // bucket -> instance

  Rank floor_rank() const { return min_rank - 1; }
};

std::pair<Rank, Rank> rank_range(Epoch e, int64_t length);
std::pair<Rank, Rank> rank_range(Epoch e, const EpochLengthFn& length);

// Leaders of view 0; instance i starts with replica i mod n.
EpochConfig init_epoch(Epoch e, int n, int m, int64_t length,
                       int num_buckets = 0);

int assign_bucket(TxId tx, int num_buckets);
std::vector<InstanceIndex> rotate_buckets(Epoch e, int m, int num_buckets);

// FIFO queue of transaction ids for one bucket.
using BucketQueue = std::deque<TxId>;

// Removes up to batch_size oldest ids; ids for which `skip` returns true are
// dropped without being returned.
std::vector<TxId> cut_batch(BucketQueue& queue, std::size_t batch_size,
                            const std::function<bool(TxId)>& skip = {});

using CheckpointSummary = std::vector<std::pair<Round, Rank>>;

Digest summary_digest(const CheckpointSummary& summary);

struct StableCheckpoint {
  Epoch epoch = 0;
  CheckpointSummary summary;
  Certificate cert;
};

// Per-replica epoch bookkeeping: contiguous commit progress per instance and
// the checkpoint quorum for the current epoch.
class EpochPacemaker {
 public:
  EpochPacemaker(int n, int f, int m, int64_t length, int num_buckets = 0);

  const EpochConfig& config() const { return config_; }
  Epoch epoch() const { return config_.epoch; }

  void record_commit(InstanceIndex i, Round round, Rank rank);
  bool instance_complete(InstanceIndex i) const;
  bool local_complete() const;
  CheckpointSummary summary() const;

  // Returns the payload to broadcast the first time the replica completes the
  // epoch locally.
  std::optional<CheckpointPayload> make_checkpoint();
  bool checkpoint_sent() const { return checkpoint_sent_; }

  // Counts a signed checkpoint; returns the stable checkpoint once 2f+1
  // matching summaries are known for the current epoch.
  std::optional<StableCheckpoint> on_checkpoint(const SignatureScheme& scheme,
                                                ReplicaId sender, Epoch epoch,
                                                const CheckpointSummary& summary,
                                                Signature sig);
  const std::optional<StableCheckpoint>& stable() const { return stable_; }

  // Advances to the next epoch iff every instance reached maxRank and a stable
  // checkpoint exists. Leaders are preserved.
  bool maybe_advance();

  void set_leader(InstanceIndex i, ReplicaId leader);

 private:
  int n_;
  int f_;
  int m_;
  int num_buckets_;
  EpochConfig config_;
  std::vector<Round> contiguous_;
  std::vector<Rank> contiguous_rank_;
  std::vector<std::vector<std::pair<Round, Rank>>> waiting_;
  bool checkpoint_sent_ = false;
  std::vector<std::pair<ReplicaId, std::pair<Digest, Signature>>> votes_;
  std::vector<std::pair<Digest, CheckpointSummary>> summaries_;
  std::optional<StableCheckpoint> stable_;
};

}  // namespace ladon
