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

#include "ladon/monitor.hpp"

#include <algorithm>
#include <tuple>

#include "ladon/epoch.hpp"

namespace ladon {

InvariantViolation::InvariantViolation(std::string name, uint64_t event_index,
                                       const std::string& detail)
    : std::runtime_error("invariant " + name + " violated at event " +
                         std::to_string(event_index) + ": " + detail),
      name_(std::move(name)),
      event_index_(event_index),
      detail_(detail) {}

InvariantMonitor::InvariantMonitor(int n, std::vector<bool> byzantine, bool ranked,
                                   int64_t epoch_length)
    : n_(n),
      byzantine_(std::move(byzantine)),
      ranked_(ranked),
      epoch_length_(epoch_length),
      confirmed_by_(static_cast<std::size_t>(n)),
      last_bar_(static_cast<std::size_t>(n)) {
  byzantine_.resize(static_cast<std::size_t>(n), false);
}

void InvariantMonitor::fail(const std::string& name, const std::string& detail) const {
  throw InvariantViolation(name, event_index_, detail);
}

void InvariantMonitor::on_partial_commit(ReplicaId r, const Block& block) {
  if (byzantine_[static_cast<std::size_t>(r)]) return;
  ++checks_;
  const auto key = std::make_tuple(block.index, block.epoch, block.round);
  auto [it, inserted] = committed_.emplace(key, Agreed{block.digest, block.rank});
  if (!inserted) {
    if (it->second.digest != block.digest || it->second.rank != block.rank) {
      fail("MR-Agreement", "replica " + std::to_string(r) + " committed a different " +
                               to_string(block.id()));
    }
    return;
  }
  if (!ranked_) return;
  const auto [lo, hi] = rank_range(block.epoch, epoch_length_);
  if (block.rank < lo || block.rank > hi) {
    fail("RankRange", to_string(block.id()) + " rank " + std::to_string(block.rank) +
                          " outside [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
  }
  if (it != committed_.begin()) {
    auto prev = std::prev(it);
    if (std::get<0>(prev->first) == block.index && prev->second.rank >= block.rank) {
      fail("Lemma3", to_string(block.id()) + " rank " + std::to_string(block.rank) +
                         " not above an earlier round's rank " +
                         std::to_string(prev->second.rank));
    }
  }
  auto next = std::next(it);
  if (next != committed_.end() && std::get<0>(next->first) == block.index &&
      next->second.rank <= block.rank) {
    fail("Lemma3", to_string(block.id()) + " rank " + std::to_string(block.rank) +
                       " not below a later round's rank " +
                       std::to_string(next->second.rank));
  }
}

void InvariantMonitor::on_confirm(ReplicaId r, uint64_t sn, const Block& block,
                                  std::optional<OrderKey> bar) {
  const auto ri = static_cast<std::size_t>(r);
  if (byzantine_[ri]) return;
  ++checks_;
  const BlockId id = block.id();
  auto [own, fresh] = sn_owner_.emplace(sn, id);
  if (!fresh && own->second != id) {
    fail("G-Agreement", "sn " + std::to_string(sn) + " holds " + to_string(own->second) +
                            " and " + to_string(id));
  }
  if (!confirmed_by_[ri].emplace(id, sn).second) {
    fail("SnInjectivity", "replica " + std::to_string(r) + " confirmed " +
                              to_string(id) + " twice");
  }
  if (bar) {
    if (!precedes(order_key(block), *bar)) {
      fail("ConfirmationSafety", to_string(id) + " key " + to_string(order_key(block)) +
                                     " not below bar " + to_string(*bar));
    }
    auto& last = last_bar_[ri];
    if (last && precedes(*bar, *last)) {
      fail("BarMonotonicity", "replica " + std::to_string(r) + " bar moved from " +
                                  to_string(*last) + " to " + to_string(*bar));
    }
    last = bar;
  }
  auto [sit, new_block] =
      block_serial_.emplace(id, static_cast<uint32_t>(block_serial_.size() + 1));
  if (!new_block || !block.txs) return;
  for (TxId tx : *block.txs) {
    if (tx >= tx_owner_.size()) tx_owner_.resize(std::max<std::size_t>(tx + 1, tx_owner_.size() * 2), 0);
    uint32_t& owner = tx_owner_[tx];
    if (owner != 0 && owner != sit->second) {
      fail("NoDuplication", "tx " + std::to_string(tx) + " confirmed in two blocks, latest " +
                                to_string(id));
    }
    owner = sit->second;
  }
}

void InvariantMonitor::check_totality(
    const std::vector<std::pair<ReplicaId, const std::vector<BlockId>*>>& logs) {
  ++checks_;
  if (logs.empty()) return;
  const auto& [r0, ref] = logs.front();
  for (const auto& [r, log] : logs) {
    if (*log != *ref) {
      fail("Totality", "replica " + std::to_string(r) + " confirmed " +
                           std::to_string(log->size()) + " blocks, replica " +
                           std::to_string(r0) + " confirmed " +
                           std::to_string(ref->size()));
    }
  }
}

}  // namespace ladon
