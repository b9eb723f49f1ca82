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

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "ladon/crypto.hpp"
#include "ladon/instance_host.hpp"

namespace ladon::testing {

struct Sent {
  ReplicaId to = -1;  // -1: broadcast
  MessagePtr msg;
};

struct TimerSet {
  TimerKind kind;
  InstanceIndex index;
  SimTime at;
  uint64_t token;
};

// Recording host for driving one consensus instance by hand.
class FakeHost final : public InstanceHost {
 public:
  FakeHost(ReplicaId self, ClusterConfig cluster, EpochConfig epoch,
           std::shared_ptr<const SignatureScheme> scheme)
      : self_(self), cluster_(cluster), epoch_(std::move(epoch)), scheme_(std::move(scheme)) {
    cur_.rank = epoch_.floor_rank();
  }

  ReplicaId self() const override { return self_; }
  const ClusterConfig& cluster() const override { return cluster_; }
  const EpochConfig& epoch() const override { return epoch_; }
  SimTime now() const override { return now_; }
  const SignatureScheme& signatures() const override { return *scheme_; }
  const Behavior& behavior() const override { return behavior_; }
  bool is_byzantine(ReplicaId r) const override {
    return std::find(byzantine_.begin(), byzantine_.end(), r) != byzantine_.end();
  }
  const CurRank& cur_rank() const override { return cur_; }
  void raise_cur_rank(Rank rank, const CertPtr& qc) override {
    if (rank > cur_.rank) cur_ = CurRank{rank, qc};
  }
  void send(ReplicaId to, MessagePtr msg) override { sent.push_back({to, std::move(msg)}); }
  void broadcast(MessagePtr msg) override { sent.push_back({-1, std::move(msg)}); }
  void set_timer(TimerKind kind, InstanceIndex index, SimTime at, uint64_t token) override {
    timers.push_back({kind, index, at, token});
  }
  std::vector<TxId> cut_batch(InstanceIndex) override {
    std::vector<TxId> out;
    for (int i = 0; i < batch && !queue.empty(); ++i) {
      out.push_back(queue.front());
      queue.pop_front();
    }
    return out;
  }
  void reserve_txs(const std::vector<TxId>& txs) override {
    reserved.insert(reserved.end(), txs.begin(), txs.end());
  }
  void release_txs(const std::vector<TxId>& txs) override {
    for (TxId t : txs) queue.push_front(t);
  }
  void on_partial_commit(const Block& block) override { commits.push_back(block); }
  void on_leader_change(InstanceIndex, ReplicaId leader) override { leaders.push_back(leader); }
  bool proposals_allowed() const override { return allowed; }
  SimTime epoch_gen_time() const override { return 0; }
  void record(TraceRecord rec) override { records.push_back(std::move(rec)); }

  // Messages of one type sent since the last clear.
  std::vector<Sent> of(MsgType type) const {
    std::vector<Sent> out;
    for (const auto& s : sent) {
      if (s.msg->type == type) out.push_back(s);
    }
    return out;
  }

  template <typename T>
  std::vector<T> recorded() const {
    std::vector<T> out;
    for (const auto& r : records) {
      if (const auto* p = std::get_if<T>(&r)) out.push_back(*p);
    }
    return out;
  }

  void set_cur(Rank rank, CertPtr qc) { cur_ = CurRank{rank, std::move(qc)}; }
  void set_now(SimTime t) { now_ = t; }
  Behavior& behavior_mut() { return behavior_; }
  void set_byzantine(std::vector<ReplicaId> b) { byzantine_ = std::move(b); }
  EpochConfig& epoch_mut() { return epoch_; }

  std::vector<Sent> sent;
  std::vector<TimerSet> timers;
  std::vector<Block> commits;
  std::vector<ReplicaId> leaders;
  std::vector<TxId> reserved;
  std::vector<TraceRecord> records;
  std::deque<TxId> queue;
  int batch = 4;
  bool allowed = true;

 private:
  ReplicaId self_;
  ClusterConfig cluster_;
  EpochConfig epoch_;
  std::shared_ptr<const SignatureScheme> scheme_;
  Behavior behavior_;
  std::vector<ReplicaId> byzantine_;
  CurRank cur_;
  SimTime now_ = 0;
};

// n hosts each running one instance of type I for instance `index`, with a
// FIFO pump that delivers whatever the hosts send.
template <typename I>
class MiniCluster {
 public:
  MiniCluster(int n, int f, Protocol protocol, int64_t epoch_length,
              InstanceIndex index = 0, int m = 0)
      : scheme(std::make_shared<SimulatedSignatures>(99, n)) {
    cluster.n = n;
    cluster.f = f;
    cluster.m = m > 0 ? m : n;
    cluster.protocol = protocol;
    cluster.base_interval = 10 * kMillisecond;
    cluster.view_change_timeout = 1 * kSecond;
    cluster.rank_keys = static_cast<int32_t>(epoch_length);
    EpochConfig ep = init_epoch(0, n, cluster.m, epoch_length);
    for (ReplicaId r = 0; r < n; ++r) {
      hosts.push_back(std::make_unique<FakeHost>(r, cluster, ep, scheme));
      for (TxId t = 1; t <= 64; ++t) hosts.back()->queue.push_back(1000 * (r + 1) + t);
    }
    for (ReplicaId r = 0; r < n; ++r) instances.push_back(std::make_unique<I>(index, *hosts[r]));
  }

  int size() const { return static_cast<int>(hosts.size()); }
  FakeHost& host(ReplicaId r) { return *hosts[r]; }
  I& inst(ReplicaId r) { return *instances[r]; }

  void start() {
    for (auto& i : instances) i->start_epoch();
  }

  void set_now(SimTime t) {
    for (auto& h : hosts) h->set_now(t);
  }

  // Fires every pending Propose timer due at or before `t`.
  void fire_propose_timers(SimTime t) {
    set_now(t);
    for (ReplicaId r = 0; r < size(); ++r) {
      auto timers = hosts[r]->timers;
      hosts[r]->timers.clear();
      for (const auto& tm : timers) {
        if (tm.kind == TimerKind::Propose && tm.at <= t) {
          instances[r]->on_timer(tm.kind, tm.token);
        } else {
          hosts[r]->timers.push_back(tm);
        }
      }
    }
  }

  // Latest RoundTimeout timer of replica r.
  std::optional<TimerSet> round_timer(ReplicaId r) const {
    std::optional<TimerSet> out;
    for (const auto& t : hosts[r]->timers) {
      if (t.kind == TimerKind::RoundTimeout) out = t;
    }
    return out;
  }

  // Delivers queued messages until quiet. `drop(from, to, msg)` filters.
  std::function<bool(ReplicaId, ReplicaId, const Message&)> drop;
  std::vector<bool> down;

  std::size_t pump(std::size_t limit = 1000000) {
    std::size_t delivered = 0;
    if (down.size() != hosts.size()) down.assign(hosts.size(), false);
    while (delivered < limit) {
      bool any = false;
      for (ReplicaId r = 0; r < size(); ++r) {
        auto out = std::move(hosts[r]->sent);
        hosts[r]->sent.clear();
        log[r].insert(log[r].end(), out.begin(), out.end());
        for (const auto& s : out) {
          for (ReplicaId d = 0; d < size(); ++d) {
            if (s.to != -1 && s.to != d) continue;
            pending.push_back({r, d, s.msg});
          }
        }
      }
      while (!pending.empty() && delivered < limit) {
        auto [from, to, msg] = pending.front();
        pending.pop_front();
        if (down[from] || down[to]) continue;
        if (drop && drop(from, to, *msg)) continue;
        instances[to]->on_message(msg);
        ++delivered;
        any = true;
      }
      if (!any) break;
    }
    return delivered;
  }

  struct Pending {
    ReplicaId from;
    ReplicaId to;
    MessagePtr msg;
  };

  ClusterConfig cluster;
  std::shared_ptr<SimulatedSignatures> scheme;
  std::vector<std::unique_ptr<FakeHost>> hosts;
  std::vector<std::unique_ptr<I>> instances;
  std::deque<Pending> pending;
  std::map<ReplicaId, std::vector<Sent>> log;
};

}  // namespace ladon::testing
