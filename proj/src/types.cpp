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

#include "ladon/types.hpp"

#include <algorithm>
#include <stdexcept>

#include "ladon/hash.hpp"

namespace ladon {

Digest digest_of(const std::vector<TxId>& txs) {
  Fnv1a h;
  h.add(txs.size());
  for (TxId id : txs) h.add(id);
  return h.value();
}

std::string to_string(const BlockId& id) {
  return "e" + std::to_string(id.epoch) + "/i" + std::to_string(id.index) +
         "/n" + std::to_string(id.round);
}

Block make_block(std::vector<TxId> txs, InstanceIndex index, Round round,
                 Rank rank, Epoch epoch) {
  Block b;
  b.digest = digest_of(txs);
  b.txs = std::make_shared<const std::vector<TxId>>(std::move(txs));
  b.index = index;
  b.round = round;
  b.rank = rank;
  b.epoch = epoch;
  return b;
}

OrderKey order_key(const Block& block) {
  return OrderKey{block.rank, block.index};
}

std::string to_string(const OrderKey& key) {
  return "(" + std::to_string(key.rank) + "," + std::to_string(key.index) + ")";
}

const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::PrePrepare: return "PrePrepare";
    case MsgType::Prepare: return "Prepare";
    case MsgType::Commit: return "Commit";
    case MsgType::Rank: return "Rank";
    case MsgType::Generic: return "Generic";
    case MsgType::Vote: return "Vote";
    case MsgType::NewView: return "NewView";
    case MsgType::Checkpoint: return "Checkpoint";
    case MsgType::ViewChange: return "ViewChange";
  }
  return "?";
}

uint64_t Fingerprint::hash() const {
  uint64_t h = mix64(static_cast<uint64_t>(type));
  h = hash_combine(h, static_cast<uint64_t>(epoch));
  h = hash_combine(h, static_cast<uint64_t>(view));
  h = hash_combine(h, static_cast<uint64_t>(round));
  h = hash_combine(h, digest);
  h = hash_combine(h, static_cast<uint64_t>(index));
  h = hash_combine(h, static_cast<uint64_t>(rank));
  h = hash_combine(h, static_cast<uint64_t>(key_index));
  return h;
}

bool Fingerprint::same_message(const Fingerprint& o) const {
  return type == o.type && epoch == o.epoch && view == o.view &&
         round == o.round && digest == o.digest && index == o.index &&
         rank == o.rank;
}

std::vector<ReplicaId> Certificate::signers() const {
  std::vector<ReplicaId> out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.push_back(p.signer);
  return out;
}

const Fingerprint& Certificate::fingerprint() const {
  if (parts.empty()) throw std::logic_error("empty certificate");
  for (const auto& p : parts) {
    if (!(p.fingerprint == parts.front().fingerprint)) {
      throw std::logic_error("certificate parts sign different messages");
    }
  }
  return parts.front().fingerprint;
}

}  // namespace ladon
