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

#include "ladon/epoch.hpp"

#include <algorithm>
#include <stdexcept>

#include "ladon/hash.hpp"

namespace ladon {

std::pair<Rank, Rank> rank_range(Epoch e, int64_t length) {
  if (e < 0 || length <= 0) throw std::invalid_argument("bad epoch or length");
  return {e * length, e * length + length - 1};
}

std::pair<Rank, Rank> rank_range(Epoch e, const EpochLengthFn& length) {
  if (e < 0) throw std::invalid_argument("negative epoch");
  Rank max_prev = -1;
  for (Epoch x = 0; x < e; ++x) max_prev += length(x);
  return {max_prev + 1, max_prev + length(e)};
}

EpochConfig init_epoch(Epoch e, int n, int m, int64_t length,
                       int num_buckets) {
  if (m < 1 || m > n) throw std::invalid_argument("need 1 <= m <= n");
  EpochConfig c;
  c.epoch = e;
  c.length = length;
  std::tie(c.min_rank, c.max_rank) = rank_range(e, length);
  for (int i = 0; i < m; ++i) c.leaders.push_back(i % n);
  c.bucket_assignment = rotate_buckets(e, m, num_buckets > 0 ? num_buckets : m);
  return c;
}

int assign_bucket(TxId tx, int num_buckets) {
  return static_cast<int>(mix64(tx) % static_cast<uint64_t>(num_buckets));
}

std::vector<InstanceIndex> rotate_buckets(Epoch e, int m, int num_buckets) {
  std::vector<InstanceIndex> out(static_cast<std::size_t>(num_buckets));
  for (int b = 0; b < num_buckets; ++b) {
    out[static_cast<std::size_t>(b)] =
        static_cast<InstanceIndex>((b + e) % m);
  }
  return out;
}

std::vector<TxId> cut_batch(BucketQueue& queue, std::size_t batch_size,
                            const std::function<bool(TxId)>& skip) {
  std::vector<TxId> out;
  while (!queue.empty() && out.size() < batch_size) {
    const TxId id = queue.front();
    queue.pop_front();
    if (skip && skip(id)) continue;
    out.push_back(id);
  }
  return out;
}

Digest summary_digest(const CheckpointSummary& summary) {
  Fnv1a h;
  for (const auto& [round, rank] : summary) {
    h.add(static_cast<uint64_t>(round));
    h.add(static_cast<uint64_t>(rank));
  }
  return h.value();
}

EpochPacemaker::EpochPacemaker(int n, int f, int m, int64_t length,
                               int num_buckets)
    : n_(n), f_(f), m_(m), num_buckets_(num_buckets > 0 ? num_buckets : m) {
  config_ = init_epoch(0, n, m, length, num_buckets_);
  contiguous_.assign(static_cast<std::size_t>(m), 0);
  contiguous_rank_.assign(static_cast<std::size_t>(m), config_.floor_rank());
  waiting_.assign(static_cast<std::size_t>(m), {});
}

void EpochPacemaker::record_commit(InstanceIndex i, Round round, Rank rank) {
  const auto idx = static_cast<std::size_t>(i);
  waiting_[idx].emplace_back(round, rank);
  bool progressed = true;
  while (progressed) {
    progressed = false;
    auto& w = waiting_[idx];
    for (auto it = w.begin(); it != w.end(); ++it) {
      if (it->first == contiguous_[idx] + 1) {
        contiguous_[idx] = it->first;
        contiguous_rank_[idx] = it->second;
        w.erase(it);
        progressed = true;
        break;
      }
    }
  }
}

bool EpochPacemaker::instance_complete(InstanceIndex i) const {
  return contiguous_rank_[static_cast<std::size_t>(i)] == config_.max_rank;
}

bool EpochPacemaker::local_complete() const {
  for (int i = 0; i < m_; ++i) {
    if (!instance_complete(i)) return false;
  }
  return true;
}

CheckpointSummary EpochPacemaker::summary() const {
  CheckpointSummary s;
  for (int i = 0; i < m_; ++i) {
    s.emplace_back(contiguous_[static_cast<std::size_t>(i)],
                   contiguous_rank_[static_cast<std::size_t>(i)]);
  }
  return s;
}

std::optional<CheckpointPayload> EpochPacemaker::make_checkpoint() {
  if (checkpoint_sent_ || !local_complete()) return std::nullopt;
  checkpoint_sent_ = true;
  return CheckpointPayload{summary()};
}

std::optional<StableCheckpoint> EpochPacemaker::on_checkpoint(
    const SignatureScheme& scheme, ReplicaId sender, Epoch epoch,
    const CheckpointSummary& summary, Signature sig) {
  if (epoch != config_.epoch || stable_) return stable_;
  const Digest d = summary_digest(summary);
  Fingerprint fp;
  fp.type = MsgType::Checkpoint;
  fp.epoch = epoch;
  fp.digest = d;
  if (!scheme.verify(sender, fp, sig)) return std::nullopt;
  for (const auto& v : votes_) {
    if (v.first == sender) return std::nullopt;
  }
  votes_.push_back({sender, {d, sig}});
  if (std::none_of(summaries_.begin(), summaries_.end(),
                   [&](const auto& s) { return s.first == d; })) {
    summaries_.emplace_back(d, summary);
  }
  std::vector<SignatureShare> shares;
  for (const auto& v : votes_) {
    if (v.second.first == d) shares.push_back({v.first, fp, v.second.second});
  }
  if (shares.size() < static_cast<std::size_t>(2 * f_ + 1)) return std::nullopt;
  auto cert = aggregate(scheme, std::move(shares));
  if (!cert) return std::nullopt;
  stable_ = StableCheckpoint{epoch, summary, std::move(*cert)};
  return stable_;
}

bool EpochPacemaker::maybe_advance() {
  if (!local_complete() || !stable_ || stable_->epoch != config_.epoch) {
    return false;
  }
  const auto leaders = config_.leaders;
  config_ = init_epoch(config_.epoch + 1, n_, m_, config_.length, num_buckets_);
  config_.leaders = leaders;
  contiguous_.assign(static_cast<std::size_t>(m_), 0);
  contiguous_rank_.assign(static_cast<std::size_t>(m_), config_.floor_rank());
  for (auto& w : waiting_) w.clear();
  checkpoint_sent_ = false;
  votes_.clear();
  summaries_.clear();
  stable_.reset();
  return true;
}

void EpochPacemaker::set_leader(InstanceIndex i, ReplicaId leader) {
  config_.leaders[static_cast<std::size_t>(i)] = leader;
}

}  // namespace ladon
