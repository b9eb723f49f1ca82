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

#include "ladon/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <set>

#include "ladon/global_ordering.hpp"
#include "ladon/hotstuff_instance.hpp"
#include "ladon/pbft_instance.hpp"

namespace ladon {

namespace {

enum class EventKind : uint8_t { Deliver, Timer, ClientSubmit, Crash, Cutoff };

struct Event {
  SimTime time = 0;
  uint64_t seq = 0;
  EventKind kind = EventKind::Deliver;
  ReplicaId replica = 0;
  MessagePtr msg;
  TimerKind timer = TimerKind::Propose;
  InstanceIndex index = 0;
  uint64_t token = 0;
  Epoch epoch = 0;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return a.time != b.time ? a.time > b.time : a.seq > b.seq;
  }
};

// Purposes for per-replica RNG streams.
constexpr uint64_t kNetworkStream = 1;

enum TxState : uint8_t { kFree = 0, kReserved = 1, kCommitted = 2 };

class Simulator;

class Replica final : public InstanceHost {
 public:
  Replica(Simulator& sim, ReplicaId id);

  void start();
  void deliver(const MessagePtr& msg);
  void fire(const Event& ev);
  void after_event();
  void crash() { crashed_ = true; }
  bool crashed() const { return crashed_; }
  void add_tx(TxId tx, int bucket);
  Epoch current_epoch() const { return epoch().epoch; }
  const std::vector<BlockId>& log() const { return log_; }

  ReplicaId self() const override { return id_; }
  const ClusterConfig& cluster() const override;
  const EpochConfig& epoch() const override;
  SimTime now() const override;
  const SignatureScheme& signatures() const override;
  const Behavior& behavior() const override { return behavior_; }
  bool is_byzantine(ReplicaId r) const override;
  const CurRank& cur_rank() const override { return cur_; }
  void raise_cur_rank(Rank rank, const CertPtr& qc) override;
  void send(ReplicaId to, MessagePtr msg) override;
  void broadcast(MessagePtr msg) override;
  void set_timer(TimerKind kind, InstanceIndex index, SimTime at,
                 uint64_t token) override;
  std::vector<TxId> cut_batch(InstanceIndex index) override;
  void reserve_txs(const std::vector<TxId>& txs) override;
  void release_txs(const std::vector<TxId>& txs) override;
  void on_partial_commit(const Block& block) override;
  void on_leader_change(InstanceIndex index, ReplicaId leader) override;
  bool proposals_allowed() const override;
  SimTime epoch_gen_time() const override { return epoch_gen_time_; }
  void record(TraceRecord rec) override;

 private:
  void handle_checkpoint(const MessagePtr& msg);
  void try_advance();
  void confirm(const std::vector<Block>& blocks, std::optional<OrderKey> bar,
               std::size_t log_size);
  void prune_queues();

  Simulator& sim_;
  ReplicaId id_;
  Behavior behavior_;
  bool crashed_ = false;
  CurRank cur_;
  EpochPacemaker pacemaker_;
  EpochConfig baseline_epoch_;
  OrderingState ordering_;
  PredeterminedState predetermined_;
  std::vector<std::unique_ptr<ConsensusInstance>> instances_;
  std::vector<BucketQueue> buckets_;
  std::vector<uint8_t> tx_state_;
  std::vector<MessagePtr> future_;
  std::vector<BlockId> log_;
  SimTime epoch_gen_time_ = 0;
  SimTime local_complete_time_ = 0;
  uint64_t confirmed_txs_ = 0;
};

class Simulator {
 public:
  explicit Simulator(const Scenario& s);

  RunOutcome run();

  const Scenario& scenario() const { return s_; }
  const ClusterConfig& cluster() const { return cluster_; }
  const SignatureScheme& signatures() const { return sigs_; }
  SimTime now() const { return now_; }
  bool ranked() const { return !cluster_.baseline(); }
  const std::vector<Behavior>& behaviors() const { return behaviors_; }
  const std::optional<Epoch>& drain_epoch() const { return drain_epoch_; }
  bool load_open() const { return now_ < s_.cutoff(); }
  uint64_t submitted() const { return next_tx_ - 1; }
  InvariantMonitor& monitor() { return monitor_; }

  void transmit(ReplicaId src, ReplicaId dst, const MessagePtr& msg);
  void schedule(Event ev);
  void record(TraceRecord rec) { trace_.records.push_back(std::move(rec)); }
  void record_content(const Block& block);

 private:
  void submit_load();
  void cutoff();

  Scenario s_;
  ClusterConfig cluster_;
  SimulatedSignatures sigs_;
  std::vector<Behavior> behaviors_;
  InvariantMonitor monitor_;
  std::vector<std::unique_ptr<Replica>> replicas_;
  std::vector<Rng> net_rng_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  uint64_t seq_ = 0;
  SimTime now_ = 0;
  Trace trace_;
  std::set<BlockId> content_seen_;
  TxId next_tx_ = 1;
  double load_carry_ = 0.0;
  std::optional<Epoch> drain_epoch_;
};

std::vector<bool> byzantine_flags(const Scenario& s) {
  std::vector<bool> out(static_cast<std::size_t>(s.n), false);
  for (ReplicaId r = 0; r < s.n; ++r) out[static_cast<std::size_t>(r)] =
      behavior_for(s.faults, r, s.n).byzantine;
  return out;
}

// ---------------------------------------------------------------- Replica

Replica::Replica(Simulator& sim, ReplicaId id)
    : sim_(sim),
      id_(id),
      behavior_(sim.behaviors()[static_cast<std::size_t>(id)]),
      pacemaker_(sim.cluster().n, sim.cluster().f, sim.cluster().m,
                 sim.scenario().epoch_length, sim.scenario().buckets()),
      ordering_(make_ordering_state(sim.cluster().m)) {
  const auto& c = sim.cluster();
  baseline_epoch_ = init_epoch(0, c.n, c.m, sim.scenario().epoch_length,
                               sim.scenario().buckets());
  baseline_epoch_.max_rank = std::numeric_limits<Rank>::max() / 4;
  predetermined_.m = c.m;
  buckets_.resize(static_cast<std::size_t>(sim.scenario().buckets()));
  tx_state_.push_back(kFree);  // tx ids start at 1
  for (InstanceIndex i = 0; i < c.m; ++i) {
    if (c.protocol == Protocol::LadonHotStuff) {
      instances_.push_back(std::make_unique<HotStuffInstance>(i, *this));
    } else {
      instances_.push_back(std::make_unique<PbftInstance>(i, *this));
    }
  }
}

const ClusterConfig& Replica::cluster() const { return sim_.cluster(); }

const EpochConfig& Replica::epoch() const {
  return sim_.ranked() ? pacemaker_.config() : baseline_epoch_;
}

SimTime Replica::now() const { return sim_.now(); }

const SignatureScheme& Replica::signatures() const { return sim_.signatures(); }

bool Replica::is_byzantine(ReplicaId r) const {
  return sim_.behaviors()[static_cast<std::size_t>(r)].byzantine;
}

void Replica::start() {
  for (auto& inst : instances_) inst->start_epoch();
}

void Replica::raise_cur_rank(Rank rank, const CertPtr& qc) {
  if (rank <= cur_.rank) return;
  cur_ = CurRank{rank, qc};
  record(trace::RankUpdate{now(), id_, rank});
}

void Replica::send(ReplicaId to, MessagePtr msg) {
  if (crashed_) return;
  sim_.transmit(id_, to, msg);
}

void Replica::broadcast(MessagePtr msg) {
  if (crashed_) return;
  for (ReplicaId r = 0; r < cluster().n; ++r) sim_.transmit(id_, r, msg);
}

void Replica::set_timer(TimerKind kind, InstanceIndex index, SimTime at,
                        uint64_t token) {
  Event ev;
  ev.time = std::max(at, now());
  ev.kind = EventKind::Timer;
  ev.replica = id_;
  ev.timer = kind;
  ev.index = index;
  ev.token = token;
  ev.epoch = current_epoch();
  sim_.schedule(std::move(ev));
}

void Replica::add_tx(TxId tx, int bucket) {
  if (tx_state_.size() <= tx) tx_state_.resize(tx + 1, kFree);
  if (crashed_) return;
  buckets_[static_cast<std::size_t>(bucket)].push_back(tx);
}

std::vector<TxId> Replica::cut_batch(InstanceIndex index) {
  std::vector<TxId> out;
  const auto& assignment = epoch().bucket_assignment;
  const std::size_t batch = cluster().batch_size;
  const auto skip = [this](TxId tx) { return tx_state_[tx] != kFree; };
  for (std::size_t b = 0; b < buckets_.size() && out.size() < batch; ++b) {
    if (assignment[b] != index) continue;
    auto part = ladon::cut_batch(buckets_[b], batch - out.size(), skip);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

void Replica::reserve_txs(const std::vector<TxId>& txs) {
  for (TxId tx : txs) {
    if (tx < tx_state_.size() && tx_state_[tx] == kFree) tx_state_[tx] = kReserved;
  }
}

void Replica::release_txs(const std::vector<TxId>& txs) {
  const int nb = static_cast<int>(buckets_.size());
  for (auto it = txs.rbegin(); it != txs.rend(); ++it) {
    const TxId tx = *it;
    if (tx >= tx_state_.size() || tx_state_[tx] != kReserved) continue;
    tx_state_[tx] = kFree;
    buckets_[static_cast<std::size_t>(assign_bucket(tx, nb))].push_front(tx);
  }
}

void Replica::prune_queues() {
  for (auto& q : buckets_) {
    while (!q.empty() && tx_state_[q.front()] == kCommitted) q.pop_front();
  }
}

void Replica::on_partial_commit(const Block& block) {
  sim_.monitor().on_partial_commit(id_, block);
  record(trace::PartialCommit{now(), id_, block.epoch, block.index, block.round,
                              block.rank, block.digest, block.tx_count()});
  sim_.record_content(block);
  if (block.txs) {
    for (TxId tx : *block.txs) {
      if (tx_state_.size() <= tx) tx_state_.resize(tx + 1, kFree);
      tx_state_[tx] = kCommitted;
    }
  }
  prune_queues();
  if (!sim_.ranked()) {
    auto out = ladon::on_partial_commit(predetermined_, block);
    confirm(out.confirmed, std::nullopt, predetermined_.g_out.size());
    return;
  }
  pacemaker_.record_commit(block.index, block.round, block.rank);
  auto out = ladon::on_partial_commit(ordering_, block);
  confirm(out.confirmed, ordering_.bar, ordering_.g_out.size());
  if (auto cp = pacemaker_.make_checkpoint()) {
    local_complete_time_ = now();
    auto m = std::make_shared<Message>();
    m->type = MsgType::Checkpoint;
    m->sender = id_;
    m->epoch = current_epoch();
    m->digest = summary_digest(cp->summary);
    m->sig = signatures().sign(id_, m->fingerprint());
    m->body = std::move(*cp);
    record(trace::Checkpoint{now(), id_, current_epoch(), false});
    broadcast(m);
  }
}

void Replica::confirm(const std::vector<Block>& blocks, std::optional<OrderKey> bar,
                      std::size_t log_size) {
  uint64_t sn = log_size - blocks.size();
  for (const auto& b : blocks) {
    sim_.monitor().on_confirm(id_, sn, b, bar);
    log_.push_back(b.id());
    confirmed_txs_ += b.tx_count();
    trace::GlobalConfirm gc{now(), id_, sn, b.epoch, b.index, b.round, b.rank,
                            bar.value_or(OrderKey{-1, -1})};
    record(gc);
    ++sn;
  }
}

void Replica::on_leader_change(InstanceIndex index, ReplicaId leader) {
  if (sim_.ranked()) pacemaker_.set_leader(index, leader);
}

bool Replica::proposals_allowed() const {
  // The baseline keeps filling its fixed slots until this replica has
  // confirmed every submitted transaction.
  if (!sim_.ranked()) return sim_.load_open() || confirmed_txs_ < sim_.submitted();
  const auto& drain = sim_.drain_epoch();
  return !drain || current_epoch() <= *drain;
}

void Replica::record(TraceRecord rec) { sim_.record(std::move(rec)); }

void Replica::deliver(const MessagePtr& msg) {
  if (crashed_) return;
  if (sim_.ranked()) {
    if (msg->epoch > current_epoch()) {
      future_.push_back(msg);
      return;
    }
    if (msg->epoch < current_epoch()) return;
  }
  if (msg->type == MsgType::Checkpoint) {
    handle_checkpoint(msg);
    return;
  }
  if (msg->index < 0 || msg->index >= cluster().m) return;
  instances_[static_cast<std::size_t>(msg->index)]->on_message(msg);
}

void Replica::handle_checkpoint(const MessagePtr& msg) {
  if (!sim_.ranked()) return;
  const auto* cp = std::get_if<CheckpointPayload>(&msg->body);
  if (!cp) return;
  const bool was_stable = pacemaker_.stable().has_value();
  auto st = pacemaker_.on_checkpoint(signatures(), msg->sender, msg->epoch,
                                     cp->summary, msg->sig);
  if (st && !was_stable) record(trace::Checkpoint{now(), id_, st->epoch, true});
}

void Replica::fire(const Event& ev) {
  if (crashed_) return;
  if (sim_.ranked() && ev.epoch != current_epoch()) return;
  instances_[static_cast<std::size_t>(ev.index)]->on_timer(ev.timer, ev.token);
}

void Replica::after_event() {
  if (!crashed_) try_advance();
}

void Replica::try_advance() {
  if (!sim_.ranked()) return;
  for (;;) {
    const auto& drain = sim_.drain_epoch();
    if (drain && current_epoch() >= *drain) return;
    if (!pacemaker_.maybe_advance()) return;
    const EpochConfig& ep = pacemaker_.config();
    epoch_gen_time_ = local_complete_time_;
    begin_epoch(ordering_, ep.epoch, ep.min_rank);
    record(trace::EpochChange{now(), id_, ep.epoch});
    for (auto& inst : instances_) inst->start_epoch();
    std::vector<MessagePtr> pending;
    pending.swap(future_);
    for (const auto& m : pending) {
      if (m->epoch > ep.epoch) {
        future_.push_back(m);
      } else if (m->epoch == ep.epoch) {
        deliver(m);
      }
    }
  }
}

// -------------------------------------------------------------- Simulator

Simulator::Simulator(const Scenario& s)
    : s_(s),
      cluster_(s.cluster()),
      sigs_(mix64(s.seed ^ 0x5157ULL), s.n),
      monitor_(s.n, byzantine_flags(s), s.protocol != Protocol::BaselinePredetermined,
               s.epoch_length) {
  for (ReplicaId r = 0; r < s.n; ++r) {
    behaviors_.push_back(behavior_for(s.faults, r, s.n));
    net_rng_.emplace_back(hash_combine(hash_combine(s.seed, static_cast<uint64_t>(r)),
                                       kNetworkStream));
  }
  for (ReplicaId r = 0; r < s.n; ++r) {
    replicas_.push_back(std::make_unique<Replica>(*this, r));
  }
}

void Simulator::schedule(Event ev) {
  ev.seq = seq_++;
  queue_.push(std::move(ev));
}

void Simulator::transmit(ReplicaId src, ReplicaId dst, const MessagePtr& msg) {
  const SimTime delay = sample_delay(s_.network, src, dst, now_,
                                     net_rng_[static_cast<std::size_t>(src)]);
  const WireCost cost = wire_cost(*msg, s_.clients.payload_size);
  auto& tot = trace_.message_totals[static_cast<std::size_t>(msg->type)];
  ++tot.count;
  tot.bytes += cost.bytes;
  tot.rank_units += cost.rank_units;
  tot.auth_ops += cost.auth_ops;
  if (s_.trace_messages) {
    record(trace::MessageEvent{now_, now_ + delay, src, dst, msg->type, msg->index,
                               msg->round, cost.bytes, cost.rank_units, cost.auth_ops});
  }
  Event ev;
  ev.time = now_ + delay;
  ev.kind = EventKind::Deliver;
  ev.replica = dst;
  ev.msg = msg;
  schedule(std::move(ev));
}

void Simulator::record_content(const Block& block) {
  if (!content_seen_.insert(block.id()).second) return;
  trace::BlockContent bc{block.epoch, block.index, block.round, {}};
  if (block.txs) bc.txs = *block.txs;
  record(std::move(bc));
}

void Simulator::submit_load() {
  load_carry_ += s_.clients.tx_per_second *
                 static_cast<double>(s_.clients.submit_interval) / kSecond;
  const auto count = static_cast<uint64_t>(std::floor(load_carry_));
  load_carry_ -= static_cast<double>(count);
  if (count > 0) {
    record(trace::ClientSubmit{now_, next_tx_, count});
    const int nb = s_.buckets();
    for (uint64_t k = 0; k < count; ++k) {
      const TxId tx = next_tx_++;
      const int b = assign_bucket(tx, nb);
      for (auto& r : replicas_) r->add_tx(tx, b);
    }
  }
  const SimTime next = now_ + s_.clients.submit_interval;
  if (next < s_.cutoff()) {
    Event ev;
    ev.time = next;
    ev.kind = EventKind::ClientSubmit;
    schedule(std::move(ev));
  }
}

void Simulator::cutoff() {
  Epoch max_epoch = 0;
  for (const auto& r : replicas_) {
    if (!r->crashed()) max_epoch = std::max(max_epoch, r->current_epoch());
  }
  drain_epoch_ = max_epoch;
}

RunOutcome Simulator::run() {
  RunOutcome out;
  trace::Config cfg;
  cfg.protocol = to_string(s_.protocol);
  cfg.n = s_.n;
  cfg.f = s_.f;
  cfg.m = cluster_.m;
  cfg.epoch_length = s_.epoch_length;
  cfg.base_interval = cluster_.base_interval;
  cfg.duration = s_.duration;
  cfg.load_cutoff = s_.cutoff();
  cfg.warmup = s_.warmup;
  cfg.seed = s_.seed;
  for (ReplicaId r = 0; r < s_.n; ++r) {
    const Behavior& b = behaviors_[static_cast<std::size_t>(r)];
    if (b.honest()) cfg.honest.push_back(r);
    if (b.byzantine) cfg.byzantine.push_back(r);
  }
  record(std::move(cfg));

  for (ReplicaId r = 0; r < s_.n; ++r) {
    const Behavior& b = behaviors_[static_cast<std::size_t>(r)];
    if (b.crash_time) {
      Event ev;
      ev.time = *b.crash_time;
      ev.kind = EventKind::Crash;
      ev.replica = r;
      schedule(std::move(ev));
    }
  }
  if (s_.cutoff() < s_.duration) {
    Event ev;
    ev.time = s_.cutoff();
    ev.kind = EventKind::Cutoff;
    schedule(std::move(ev));
  }
  Event first;
  first.kind = EventKind::ClientSubmit;
  schedule(std::move(first));

  uint64_t index = 0;
  try {
    monitor_.set_event_index(index);
    for (auto& r : replicas_) r->start();
    while (!queue_.empty() && queue_.top().time <= s_.duration) {
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      monitor_.set_event_index(++index);
      Replica* target = nullptr;
      switch (ev.kind) {
        case EventKind::Deliver:
          target = replicas_[static_cast<std::size_t>(ev.replica)].get();
          target->deliver(ev.msg);
          break;
        case EventKind::Timer:
          target = replicas_[static_cast<std::size_t>(ev.replica)].get();
          target->fire(ev);
          break;
        case EventKind::ClientSubmit:
          submit_load();
          break;
        case EventKind::Crash:
          replicas_[static_cast<std::size_t>(ev.replica)]->crash();
          record(trace::Crash{now_, ev.replica});
          break;
        case EventKind::Cutoff:
          cutoff();
          break;
      }
      if (target) target->after_event();
    }
    now_ = std::max(now_, s_.duration);
    if (s_.cutoff() < s_.duration && s_.duration > s_.network.gst) {
      std::vector<std::pair<ReplicaId, const std::vector<BlockId>*>> logs;
      for (const auto& r : replicas_) {
        if (!r->crashed() && !behaviors_[static_cast<std::size_t>(r->self())].byzantine) {
          logs.emplace_back(r->self(), &r->log());
        }
      }
      monitor_.check_totality(logs);
    }
  } catch (const InvariantViolation& v) {
    trace::Violation rec{now_, v.event_index(), v.name(), v.detail()};
    record(rec);
    out.violation = rec;
  }
  trace_.events_processed = index;
  for (const auto& r : replicas_) out.logs.push_back(r->log());
  out.invariant_checks = monitor_.checks();
  out.trace = std::move(trace_);
  return out;
}

}  // namespace

RunOutcome simulate(const Scenario& scenario) {
  validate(scenario);
  Simulator sim(scenario);
  return sim.run();
}

Trace run_scenario(const Scenario& scenario) {
  RunOutcome out = simulate(scenario);
  if (out.violation) {
    throw InvariantViolation(out.violation->invariant, out.violation->event_index,
                             out.violation->detail);
  }
  return std::move(out.trace);
}

}  // namespace ladon
