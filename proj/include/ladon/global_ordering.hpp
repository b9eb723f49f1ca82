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
#include <set>
#include <span>
#include <vector>

#include "ladon/types.hpp"

namespace ladon {

struct KeyedBlockLess {
  bool operator()(const std::pair<OrderKey, BlockId>& a,
                  const std::pair<OrderKey, BlockId>& b) const {
    if (precedes(a.first, b.first)) return true;
    if (precedes(b.first, a.first)) return false;
    return a.second < b.second;
  }
};

struct OrderingState {
  int num_instances = 1;
  Epoch epoch = 0;
  Rank epoch_min_rank = 0;
  std::map<BlockId, Block> g_in;
  std::vector<Block> g_out;  // position = sn
  std::vector<std::optional<Block>> last_partially_confirmed;
  OrderKey bar{0, 0};

  // Committed blocks of the current epoch above each contiguous prefix.
  std::vector<std::map<Round, Block>> waiting;
  std::set<std::pair<OrderKey, BlockId>, KeyedBlockLess> unconfirmed;
};

OrderingState make_ordering_state(int num_instances, Epoch epoch = 0,
                                  Rank epoch_min_rank = 0);

std::optional<Block> find_lowest_block(std::span<const Block> blocks);

OrderKey compute_bar(const OrderingState& state);

struct CommitOutcome {
  bool accepted = false;
  std::vector<Block> confirmed;
};

// One G_in update. A duplicate block is rejected without any state change.
CommitOutcome on_partial_commit(OrderingState& state, const Block& block);

// One G_in update carrying several blocks; rejected as a whole if any block
// is a duplicate.
CommitOutcome on_partial_commit(OrderingState& state,
                                std::span<const Block> blocks);

// Resets the per-epoch contiguity tracking. Unconfirmed blocks stay in g_in.
void begin_epoch(OrderingState& state, Epoch epoch, Rank min_rank);

// Pre-determined ordering baseline.
constexpr uint64_t predetermined_sn(InstanceIndex index, uint64_t seq, int m) {
  return seq * static_cast<uint64_t>(m) + static_cast<uint64_t>(index);
}

struct PredeterminedState {
  int m = 1;
  std::map<uint64_t, Block> pending;
  std::set<BlockId> seen;
  std::vector<Block> g_out;
};

// Block seq is round - 1; confirmation strictly follows sn and blocks on holes.
CommitOutcome on_partial_commit(PredeterminedState& state, const Block& block);

}  // namespace ladon
