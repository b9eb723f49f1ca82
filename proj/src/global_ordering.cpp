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

#include "ladon/global_ordering.hpp"

#include <stdexcept>

namespace ladon {

OrderingState make_ordering_state(int num_instances, Epoch epoch,
                                  Rank epoch_min_rank) {
  if (num_instances < 1) throw std::invalid_argument("num_instances < 1");
  OrderingState s;
  s.num_instances = num_instances;
  s.epoch = epoch;
  s.epoch_min_rank = epoch_min_rank;
  s.last_partially_confirmed.assign(static_cast<std::size_t>(num_instances),
                                    std::nullopt);
  s.waiting.assign(static_cast<std::size_t>(num_instances), {});
  s.bar = compute_bar(s);
  return s;
}

std::optional<Block> find_lowest_block(std::span<const Block> blocks) {
  if (blocks.empty()) return std::nullopt;
  const Block* best = &blocks.front();
  for (const auto& b : blocks) {
    if (precedes(order_key(b), order_key(*best))) best = &b;
  }
  return *best;
}

OrderKey compute_bar(const OrderingState& state) {
  std::optional<OrderKey> lowest;
  for (int i = 0; i < state.num_instances; ++i) {
    const auto& last = state.last_partially_confirmed[static_cast<std::size_t>(i)];
    const OrderKey k = last ? order_key(*last)
                            : OrderKey{state.epoch_min_rank - 1, i};
    if (!lowest || precedes(k, *lowest)) lowest = k;
  }
  return OrderKey{lowest->rank + 1, lowest->index};
}

namespace {

void insert_block(OrderingState& state, const Block& block) {
  if (block.index < 0 || block.index >= state.num_instances) {
    throw std::invalid_argument("block index out of range");
  }
  if (block.epoch != state.epoch) {
    throw std::invalid_argument("block from epoch " +
                                std::to_string(block.epoch) +
                                " while ordering epoch " +
                                std::to_string(state.epoch));
  }
  state.g_in.emplace(block.id(), block);
  state.unconfirmed.emplace(order_key(block), block.id());

  const auto i = static_cast<std::size_t>(block.index);
  auto& waiting = state.waiting[i];
  waiting.emplace(block.round, block);
  auto& last = state.last_partially_confirmed[i];
  Round next = last ? last->round + 1 : 1;
  for (auto it = waiting.find(next); it != waiting.end();
       it = waiting.find(next)) {
    last = it->second;
    waiting.erase(it);
    ++next;
  }
}

std::vector<Block> confirm_ready(OrderingState& state) {
  state.bar = compute_bar(state);
  std::vector<Block> out;
  while (!state.unconfirmed.empty()) {
    auto it = state.unconfirmed.begin();
    if (!precedes(it->first, state.bar)) break;
    const Block& b = state.g_in.at(it->second);
    state.g_out.push_back(b);
    out.push_back(b);
    state.unconfirmed.erase(it);
  }
  return out;
}

}  // namespace

CommitOutcome on_partial_commit(OrderingState& state, const Block& block) {
  return on_partial_commit(state, std::span<const Block>(&block, 1));
}

CommitOutcome on_partial_commit(OrderingState& state,
                                std::span<const Block> blocks) {
  CommitOutcome out;
  std::set<BlockId> ids;
  for (const auto& b : blocks) {
    if (state.g_in.count(b.id()) || !ids.insert(b.id()).second) return out;
  }
  for (const auto& b : blocks) insert_block(state, b);
  out.accepted = true;
  out.confirmed = confirm_ready(state);
  return out;
}

void begin_epoch(OrderingState& state, Epoch epoch, Rank min_rank) {
  for (const auto& w : state.waiting) {
    if (!w.empty()) {
      throw std::logic_error("epoch change with a non-contiguous instance log");
    }
  }
  state.epoch = epoch;
  state.epoch_min_rank = min_rank;
  for (auto& last : state.last_partially_confirmed) last.reset();
  state.bar = compute_bar(state);
}

CommitOutcome on_partial_commit(PredeterminedState& state, const Block& block) {
  CommitOutcome out;
  if (!state.seen.insert(block.id()).second) return out;
  out.accepted = true;
  const uint64_t sn = predetermined_sn(
      block.index, static_cast<uint64_t>(block.round - 1), state.m);
  state.pending.emplace(sn, block);
  for (auto it = state.pending.find(state.g_out.size());
       it != state.pending.end(); it = state.pending.find(state.g_out.size())) {
    state.g_out.push_back(it->second);
    out.confirmed.push_back(it->second);
    state.pending.erase(it);
  }
  return out;
}

}  // namespace ladon
