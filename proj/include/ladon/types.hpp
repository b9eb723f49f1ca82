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

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ladon {

using ReplicaId = int32_t;
using InstanceIndex = int32_t;
using Rank = int64_t;
using Round = int64_t;
using View = int64_t;
using Epoch = int64_t;
using SimTime = int64_t;  // microseconds
using TxId = uint64_t;
using Digest = uint64_t;

constexpr SimTime kMillisecond = 1000;
constexpr SimTime kSecond = 1000 * kMillisecond;

struct Transaction {
  TxId id = 0;
  uint32_t payload_size = 0;
  SimTime created_at = 0;
  int32_t client = 0;
};

using TxList = std::shared_ptr<const std::vector<TxId>>;

// Stable FNV-1a style hash over the ordered transaction ids.
Digest digest_of(const std::vector<TxId>& txs);

struct BlockId {
  Epoch epoch = 0;
  InstanceIndex index = 0;
  Round round = 0;

  auto operator<=>(const BlockId&) const = default;
};

std::string to_string(const BlockId& id);

struct Block {
  TxList txs;
  InstanceIndex index = 0;
  Round round = 1;
  Rank rank = 0;
  Epoch epoch = 0;
  Digest digest = 0;

  BlockId id() const { return BlockId{epoch, index, round}; }
  std::size_t tx_count() const { return txs ? txs->size() : 0; }
};

Block make_block(std::vector<TxId> txs, InstanceIndex index, Round round,
                 Rank rank, Epoch epoch);

struct OrderKey {
  Rank rank = 0;
  InstanceIndex index = 0;

  bool operator==(const OrderKey&) const = default;
};

OrderKey order_key(const Block& block);

// Strict total order on (rank, index).
constexpr bool precedes(const OrderKey& a, const OrderKey& b) {
  return a.rank < b.rank || (a.rank == b.rank && a.index < b.index);
}

std::string to_string(const OrderKey& key);

enum class MsgType : uint8_t {
  PrePrepare,
  Prepare,
  Commit,
  Rank,
  Generic,
  Vote,
  NewView,
  Checkpoint,
  ViewChange,
};

const char* to_string(MsgType t);

// The signed tuple <type, v, n, d, i, rank>, extended with the epoch and the
// opt-mode key index.
struct Fingerprint {
  MsgType type = MsgType::Prepare;
  Epoch epoch = 0;
  View view = 0;
  Round round = 0;
  Digest digest = 0;
  InstanceIndex index = 0;
  Rank rank = 0;
  int32_t key_index = 0;

  bool operator==(const Fingerprint&) const = default;
  uint64_t hash() const;
  // Same message ignoring the signing key.
  bool same_message(const Fingerprint& o) const;
};

using Signature = uint64_t;

struct SignedPart {
  ReplicaId signer = 0;
  Fingerprint fingerprint;

  bool operator==(const SignedPart&) const = default;
};

struct Certificate {
  std::vector<SignedPart> parts;  // sorted by signer
  uint64_t aggregate = 0;

  std::vector<ReplicaId> signers() const;
  std::size_t size() const { return parts.size(); }
  // Fingerprint shared by all parts; throws if the parts disagree.
  const Fingerprint& fingerprint() const;
};

using CertPtr = std::shared_ptr<const Certificate>;

struct CurRank {
  Rank rank = -1;
  CertPtr qc;  // null only for the epoch floor rank
};

}  // namespace ladon

template <>
struct std::hash<ladon::BlockId> {
  std::size_t operator()(const ladon::BlockId& id) const noexcept {
    uint64_t h = static_cast<uint64_t>(id.epoch) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<uint64_t>(id.index) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    h ^= static_cast<uint64_t>(id.round) + 0x85157AF5ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};
