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

#include "ladon/messages.hpp"

namespace ladon {

namespace {

constexpr std::size_t kHeaderBytes = 64;
constexpr std::size_t kSignatureBytes = 48;
constexpr std::size_t kRankUnitBytes = 16 + kSignatureBytes;
constexpr std::size_t kCertBytes = kSignatureBytes + 32;
constexpr std::size_t kTxIdBytes = 8;

std::size_t cert_cost(const CertPtr& c) { return c ? 1 : 0; }

}  // namespace

Rank RankMessage::reported() const {
  if (mode == RankMode::Plain) return rank;
  if (explicit_rank) return *explicit_rank;
  return rank + key_index;
}

Fingerprint RankMessage::fingerprint() const {
  Fingerprint fp;
  fp.type = MsgType::Rank;
  fp.epoch = epoch;
  fp.view = view;
  fp.round = round;
  fp.index = index;
  fp.rank = rank;
  fp.key_index = mode == RankMode::Opt ? key_index : 0;
  fp.digest = explicit_rank ? static_cast<Digest>(*explicit_rank) : 0;
  return fp;
}

std::size_t RankSet::size() const {
  if (mode == RankMode::Opt && aggregate) return aggregate->size();
  return entries.size();
}

std::size_t RankSet::units() const {
  if (mode == RankMode::Opt && aggregate) return 1;
  return entries.size();
}

Fingerprint Message::fingerprint() const {
  Fingerprint fp;
  fp.type = type;
  fp.epoch = epoch;
  fp.view = view;
  fp.round = round;
  fp.digest = digest;
  fp.index = index;
  fp.rank = rank;
  return fp;
}

WireCost wire_cost(const Message& msg, uint32_t payload_size) {
  WireCost c;
  c.bytes = kHeaderBytes + kSignatureBytes;
  c.auth_ops = 1;
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, PrePreparePayload>) {
          const std::size_t txs = body.block.tx_count();
          c.bytes += txs * (payload_size + kTxIdBytes);
          c.rank_units = body.rank_set.units();
          c.bytes += c.rank_units * kRankUnitBytes +
                     body.rank_set.explicit_ranks.size() * 16;
          c.bytes += cert_cost(body.rank_qc) * kCertBytes;
          c.auth_ops += c.rank_units + cert_cost(body.rank_qc);
        } else if constexpr (std::is_same_v<T, RankMessage>) {
          c.rank_units = 1;
          c.bytes += 16 + cert_cost(body.qc) * kCertBytes;
          c.auth_ops += cert_cost(body.qc);
        } else if constexpr (std::is_same_v<T, ViewChangePayload>) {
          for (const auto& p : body.prepared) {
            c.bytes += p.block.tx_count() * (payload_size + kTxIdBytes) +
                       kCertBytes;
          }
          c.bytes += cert_cost(body.cur.qc) * kCertBytes;
          c.auth_ops += body.prepared.size() + cert_cost(body.cur.qc);
        } else if constexpr (std::is_same_v<T, NewViewPayload>) {
          c.bytes += body.view_changes.size() * (kHeaderBytes + kSignatureBytes);
          for (const auto& p : body.reproposals) {
            c.bytes += p.block.tx_count() * (payload_size + kTxIdBytes) +
                       kCertBytes;
          }
          c.auth_ops += body.view_changes.size() + body.reproposals.size();
        } else if constexpr (std::is_same_v<T, CheckpointPayload>) {
          c.bytes += body.summary.size() * 16;
        } else if constexpr (std::is_same_v<T, GenericPayload>) {
          if (body.node) {
            c.bytes += body.node->block.tx_count() * (payload_size + kTxIdBytes);
            c.bytes += cert_cost(body.node->justify) * kCertBytes;
            c.auth_ops += cert_cost(body.node->justify);
          }
          c.rank_units = body.vote_set.size();
          c.bytes += c.rank_units * kRankUnitBytes +
                     cert_cost(body.rank_qc) * kCertBytes;
          c.auth_ops += c.rank_units + cert_cost(body.rank_qc);
        } else if constexpr (std::is_same_v<T, VotePayload>) {
          c.rank_units = 1;
          c.bytes += kRankUnitBytes + cert_cost(body.report.qc) * kCertBytes;
          c.auth_ops += 1 + cert_cost(body.report.qc);
        } else if constexpr (std::is_same_v<T, HsNewViewPayload>) {
          c.rank_units = 1;
          c.bytes += kRankUnitBytes + cert_cost(body.high_qc) * kCertBytes +
                     cert_cost(body.report.qc) * kCertBytes;
          c.auth_ops += 1 + cert_cost(body.high_qc) + cert_cost(body.report.qc);
        }
      },
      msg.body);
  return c;
}

}  // namespace ladon
