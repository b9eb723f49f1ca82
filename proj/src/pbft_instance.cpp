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

#include "ladon/pbft_instance.hpp"

#include <algorithm>

#include "ladon/adversary.hpp"
#include "ladon/global_ordering.hpp"

namespace ladon {

namespace {

constexpr int kMaxBackoffShift = 6;

std::optional<Certificate> quorum_cert(const SignatureScheme& scheme,
                                       const std::vector<SignatureShare>& shares,
                                       std::size_t quorum) {
  std::vector<SignatureShare> first(shares.begin(),
                                    shares.begin() + static_cast<long>(quorum));
  return aggregate(scheme, std::move(first));
}

bool cert_matches(const PreparedCert& pc, const SignatureScheme& scheme,
                  std::size_t quorum) {
  if (!pc.qc || !verify_qc(scheme, *pc.qc, quorum)) return false;
  const Fingerprint& fp = pc.qc->parts.front().fingerprint;
  return fp.type == MsgType::Prepare && fp.view == pc.view &&
         fp.round == pc.block.round && fp.digest == pc.block.digest &&
         fp.index == pc.block.index && fp.rank == pc.block.rank &&
         fp.epoch == pc.block.epoch && pc.block.txs &&
         digest_of(*pc.block.txs) == pc.block.digest;
}

}  // namespace

NewViewPlan plan_new_view(const std::vector<MessagePtr>& view_changes,
                          const SignatureScheme& scheme, std::size_t quorum) {
  NewViewPlan plan;
  bool first = true;
  std::map<Round, PreparedCert> best;
  for (const auto& m : view_changes) {
    const auto* vc = std::get_if<ViewChangePayload>(&m->body);
    if (!vc) continue;
    if (first) {
      plan.min_committed = plan.max_committed = vc->last_committed;
      first = false;
    }
    plan.min_committed = std::min(plan.min_committed, vc->last_committed);
    plan.max_committed = std::max(plan.max_committed, vc->last_committed);
    for (const auto& pc : vc->prepared) {
      if (!cert_matches(pc, scheme, quorum)) continue;
      auto it = best.find(pc.block.round);
      if (it == best.end() || pc.view > it->second.view) {
        best[pc.block.round] = pc;
      }
    }
  }
  Round last = plan.max_committed;
  for (const auto& [round, pc] : best) {
    if (round <= plan.min_committed) continue;
    plan.reproposals.push_back(pc);
    last = std::max(last, round);
  }
  plan.next_round = last + 1;
  return plan;
}

PbftInstance::PbftInstance(InstanceIndex index, InstanceHost& host)
    : index_(index), host_(host) {}

ReplicaId PbftInstance::leader() const {
  return host_.cluster().leader_of(index_, view_);
}

bool PbftInstance::is_leader() const { return leader() == host_.self(); }

std::optional<Block> PbftInstance::committed_block(Round round) const {
  auto it = slots_.find(round);
  if (it == slots_.end() || !it->second.committed) return std::nullopt;
  return it->second.committed_block;
}

std::size_t PbftInstance::rank_messages_for(Round round) const {
  auto it = rank_msgs_.find(round);
  return it == rank_msgs_.end() ? 0 : it->second.size();
}

const Block* PbftInstance::known_block(Round round) const {
  auto it = slots_.find(round);
  if (it == slots_.end()) return nullptr;
  if (it->second.committed) return &it->second.committed_block;
  if (it->second.accepted_view >= 0) return &it->second.accepted;
  return nullptr;
}

RankContext PbftInstance::rank_context() const {
  const auto& c = host_.cluster();
  return RankContext{c.n, c.f, c.rank_mode(), c.rank_keys, &host_.signatures()};
}

void PbftInstance::start_epoch() {
  for (auto& [round, txs] : inflight_) host_.release_txs(txs);
  inflight_.clear();
  slots_.clear();
  rank_msgs_.clear();
  future_.clear();
  view_changes_.clear();
  install_rank_round_.reset();
  vc_target_ = view_;
  next_round_ = 1;
  committed_prefix_ = 0;
  pruned_below_ = 0;
  nv_wait_commit_ = 0;
  stopped_ = false;
  last_proposed_rank_ = -1;
  consecutive_failures_ = 0;
  collect_start_ = host_.epoch_gen_time();
  arm_round_timer();
  try_propose();
}

void PbftInstance::on_message(const MessagePtr& msg) {
  switch (msg->type) {
    case MsgType::PrePrepare: handle_pre_prepare(msg); break;
    case MsgType::Prepare: handle_prepare(msg); break;
    case MsgType::Commit: handle_commit(msg); break;
    case MsgType::Rank: handle_rank(msg); break;
    case MsgType::ViewChange: handle_view_change(msg); break;
    case MsgType::NewView: handle_new_view(msg); break;
    default: break;
  }
}

void PbftInstance::on_timer(TimerKind kind, uint64_t token) {
  if (kind == TimerKind::Propose) {
    if (token != propose_token_) return;
    propose_timer_at_ = -1;
    try_propose();
  } else if (token == round_token_) {
    if (!host_.proposals_allowed() && !has_pending()) return;
    handle_timeout();
  }
}

bool PbftInstance::has_pending() const {
  for (auto it = slots_.upper_bound(committed_prefix_); it != slots_.end(); ++it) {
    if (!it->second.committed && !it->second.contents.empty()) return true;
  }
  return false;
}

RankMessage PbftInstance::own_rank_message(Round round) const {
  const auto& c = host_.cluster();
  const CurRank& cur = host_.cur_rank();
  RankMessage m;
  m.sender = host_.self();
  m.epoch = host_.epoch().epoch;
  m.view = view_;
  m.round = round;
  m.index = index_;
  m.qc = cur.qc;
  m.sent_at = host_.now();
  const Block* b = round > 0 ? known_block(round) : nullptr;
  if (c.rank_mode() == RankMode::Opt && b) {
    const Rank round_rank = b->rank;
    const RankKey key =
        encode_rank_delta(std::max(cur.rank, round_rank), round_rank, c.rank_keys);
    m.mode = RankMode::Opt;
    m.rank = round_rank;
    m.key_index = key.key_index;
    m.explicit_rank = key.explicit_rank;
  } else {
    m.mode = RankMode::Plain;
    m.rank = cur.rank;
  }
  sign_rank_message(m, host_.signatures());
  return m;
}

void PbftInstance::try_propose() {
  const auto& c = host_.cluster();
  if (!is_leader() || stopped_ || view_changing() || !host_.proposals_allowed()) {
    return;
  }
  if (committed_prefix_ < nv_wait_commit_) return;
  const Round n = next_round_;
  std::vector<RankMessage> others;
  if (n > 1) {
    auto it = slots_.find(n - 1);
    if (it == slots_.end()) return;
    const Slot& prev = it->second;
    if (!prev.committed && prev.prepared_view != view_) return;
    const Block* pb = known_block(n - 1);
    if (!c.baseline() && pb && pb->rank == host_.epoch().max_rank) {
      stopped_ = true;
      return;
    }
    if (!c.baseline()) {
      auto rit = rank_msgs_.find(n - 1);
      if (rit == rank_msgs_.end() ||
          rit->second.size() < static_cast<std::size_t>(2 * c.f)) {
        return;
      }
      others = rit->second;
    }
  }
  const Behavior& beh = host_.behavior();
  if (last_proposal_) {
    const SimTime ready =
        *last_proposal_ + straggler_interval(beh.k, c.base_interval);
    if (host_.now() < ready) {
      if (propose_timer_at_ != ready) {
        propose_timer_at_ = ready;
        host_.set_timer(TimerKind::Propose, index_, ready, ++propose_token_);
      }
      return;
    }
  }
  std::vector<RankMessage> set;
  if (!c.baseline()) {
    RankMessage own = own_rank_message(n - 1);
    if (n == 1) {
      set = {own};
    } else if (beh.byzantine) {
      const std::size_t cap = static_cast<std::size_t>(2 * c.f + beh.extra_collect);
      if (others.size() > cap) others.resize(cap);
      others.insert(others.begin(), own);
      byz_pool_ = others;
      set = byz_min_rank_filter(others, c.f);
    } else {
      set = honest_rank_subset(own, others, c.f);
    }
  }
  leader_propose(std::move(set));
}

MessagePtr PbftInstance::leader_propose(std::vector<RankMessage> rank_set) {
  const auto& c = host_.cluster();
  const EpochConfig& ep = host_.epoch();
  const Behavior& beh = host_.behavior();
  if (!is_leader() || stopped_) return nullptr;
  const Round n = next_round_;

  auto msg = std::make_shared<Message>();
  PrePreparePayload pp;
  Rank rank = 0;
  trace::Propose rec;
  if (c.baseline()) {
    rank = static_cast<Rank>(predetermined_sn(index_, static_cast<uint64_t>(n - 1), c.m));
  } else {
    if (rank_set.empty()) return nullptr;
    const RankMessage* best = &rank_set.front();
    for (const auto& r : rank_set) {
      if (r.reported() > best->reported()) best = &r;
    }
    pp.rank_m = best->reported();
    pp.rank_qc = best->qc;
    rec.plain_rank_m = pp.rank_m;
    if (beh.byzantine) {
      rec.byzantine = true;
      for (const auto& r : byz_pool_.empty() ? rank_set : byz_pool_) {
        rec.collected.push_back(r.reported());
        if (!host_.is_byzantine(r.sender)) rec.honest.push_back(r.reported());
      }
      byz_pool_.clear();
    }
    pp.rank_set = make_rank_set(rank_set, n == 1 ? RankMode::Plain : c.rank_mode(),
                                host_.signatures());
    if (pp.rank_set.mode == RankMode::Opt) {
      pp.rank_m = select_rank(pp.rank_set, ep, pp.rank_set.size(), c.rank_keys).rank_m;
    }
    rank = std::min(pp.rank_m + 1, ep.max_rank);
    if (beh.byzantine && c.allow_excess_faults && last_proposed_rank_ >= 0) {
      rank = last_proposed_rank_;
    }
  }
  std::vector<TxId> txs;
  if (!beh.straggler && !beh.byzantine) txs = host_.cut_batch(index_);
  pp.block = make_block(txs, index_, n, rank, ep.epoch);

  msg->type = MsgType::PrePrepare;
  msg->sender = host_.self();
  msg->epoch = ep.epoch;
  msg->index = index_;
  msg->view = view_;
  msg->round = n;
  msg->digest = pp.block.digest;
  msg->rank = rank;
  msg->sig = host_.signatures().sign(host_.self(), msg->fingerprint());

  rec.time = host_.now();
  rec.replica = host_.self();
  rec.epoch = ep.epoch;
  rec.index = index_;
  rec.view = view_;
  rec.round = n;
  rec.rank = rank;
  rec.rank_m = pp.rank_m;
  rec.digest = pp.block.digest;
  rec.gen_time = c.baseline() ? host_.now() : collect_start_;
  rec.tx_count = txs.size();
  rec.rank_units = pp.rank_set.units();
  rec.kept = pp.rank_set.size();
  msg->body = std::move(pp);

  host_.reserve_txs(txs);
  inflight_[n] = std::move(txs);
  last_proposal_ = host_.now();
  collect_start_ = host_.now();
  last_proposed_rank_ = rank;
  ++next_round_;
  if (!c.baseline() && rank == ep.max_rank) stopped_ = true;
  host_.record(std::move(rec));
  MessagePtr out = msg;
  host_.broadcast(out);
  return out;
}

void PbftInstance::reject(const Message& msg, const char* reason) {
  trace::Reject r;
  r.time = host_.now();
  r.replica = host_.self();
  r.index = index_;
  r.view = msg.view;
  r.round = msg.round;
  r.reason = reason;
  host_.record(std::move(r));
}

MessagePtr PbftInstance::make_vote(MsgType type, Round round,
                                   const Block& block) const {
  auto m = std::make_shared<Message>();
  m->type = type;
  m->sender = host_.self();
  m->epoch = block.epoch;
  m->index = index_;
  m->view = view_;
  m->round = round;
  m->digest = block.digest;
  m->rank = block.rank;
  m->sig = host_.signatures().sign(host_.self(), m->fingerprint());
  return m;
}

void PbftInstance::handle_pre_prepare(const MessagePtr& msg) {
  const auto* pp = std::get_if<PrePreparePayload>(&msg->body);
  if (!pp || msg->round < 1 || msg->round <= pruned_below_) return;
  const Block& b = pp->block;
  if (!b.txs || digest_of(*b.txs) != b.digest || b.digest != msg->digest ||
      b.index != index_ || b.round != msg->round || b.epoch != msg->epoch ||
      b.rank != msg->rank) {
    reject(*msg, "malformed");
    return;
  }
  if (!host_.signatures().verify(msg->sender, msg->fingerprint(), msg->sig)) {
    reject(*msg, "BadSignature");
    return;
  }
  if (msg->sender != host_.cluster().leader_of(index_, msg->view)) return;
  Slot& s = slot(msg->round);
  s.contents.emplace(std::pair(b.digest, b.rank), b);
  if (msg->view > view_) {
    future_.push_back(msg);
    return;
  }
  if (msg->view < view_ || view_changing()) {
    check_committed(msg->round);
    return;
  }
  if (s.committed || s.accepted_view == view_) {
    check_committed(msg->round);
    return;
  }
  const auto& c = host_.cluster();
  if (c.baseline()) {
    if (b.rank != static_cast<Rank>(predetermined_sn(
                      index_, static_cast<uint64_t>(b.round - 1), c.m))) {
      reject(*msg, "RankMismatch");
      return;
    }
  } else if (!(host_.behavior().byzantine && host_.is_byzantine(msg->sender))) {
    const RankError err = validate_proposal_ranks(*msg, host_.epoch(), rank_context());
    if (err != RankError::Ok) {
      reject(*msg, to_string(err));
      return;
    }
  }
  s.accepted_view = view_;
  s.accepted = b;
  host_.broadcast(make_vote(MsgType::Prepare, msg->round, b));
  check_prepared(msg->round);
  check_committed(msg->round);
}

bool PbftInstance::add_share(std::vector<SignatureShare>& shares,
                             const Message& msg) {
  for (const auto& s : shares) {
    if (s.signer == msg.sender) return false;
  }
  shares.push_back({msg.sender, msg.fingerprint(), msg.sig});
  return true;
}

void PbftInstance::handle_prepare(const MessagePtr& msg) {
  if (msg->round < 1 || msg->round <= pruned_below_) return;
  if (!host_.signatures().verify(msg->sender, msg->fingerprint(), msg->sig)) return;
  Slot& s = slot(msg->round);
  if (add_share(s.prepares[VoteKey{msg->view, msg->digest, msg->rank}], *msg)) {
    check_prepared(msg->round);
  }
}

void PbftInstance::handle_commit(const MessagePtr& msg) {
  if (msg->round < 1 || msg->round <= pruned_below_) return;
  if (!host_.signatures().verify(msg->sender, msg->fingerprint(), msg->sig)) return;
  Slot& s = slot(msg->round);
  if (add_share(s.commits[VoteKey{msg->view, msg->digest, msg->rank}], *msg)) {
    check_committed(msg->round);
  }
}

void PbftInstance::check_prepared(Round round) {
  auto it = slots_.find(round);
  if (it == slots_.end()) return;
  Slot& s = it->second;
  if (view_changing() || s.accepted_view != view_ || s.prepared_view == view_) {
    return;
  }
  const auto& c = host_.cluster();
  auto pit = s.prepares.find(VoteKey{view_, s.accepted.digest, s.accepted.rank});
  if (pit == s.prepares.end() || pit->second.size() < c.quorum()) return;
  auto cert = quorum_cert(host_.signatures(), pit->second, c.quorum());
  if (!cert) return;
  s.prepared_view = view_;
  auto qc = std::make_shared<const Certificate>(std::move(*cert));
  s.cert = PreparedCert{s.accepted, view_, qc};
  if (!c.baseline()) host_.raise_cur_rank(s.accepted.rank, qc);
  host_.broadcast(make_vote(MsgType::Commit, round, s.accepted));
  if (!c.baseline()) {
    auto rm = std::make_shared<Message>();
    RankMessage r = own_rank_message(round);
    rm->type = MsgType::Rank;
    rm->sender = r.sender;
    rm->epoch = r.epoch;
    rm->index = r.index;
    rm->view = r.view;
    rm->round = r.round;
    rm->rank = r.rank;
    rm->sig = r.sig;
    rm->body = std::move(r);
    host_.send(leader(), rm);
  }
  check_committed(round);
  maybe_send_install_rank();
  try_propose();
}

void PbftInstance::check_committed(Round round) {
  auto it = slots_.find(round);
  if (it == slots_.end() || it->second.committed) return;
  Slot& s = it->second;
  const auto quorum = host_.cluster().quorum();
  for (const auto& [key, shares] : s.commits) {
    if (shares.size() < quorum) continue;
    auto cit = s.contents.find(std::pair(key.digest, key.rank));
    if (cit == s.contents.end()) continue;
    const Block block = cit->second;
    commit(round, block, shares);
    return;
  }
}

void PbftInstance::commit(Round round, const Block& block,
                          const std::vector<SignatureShare>& shares) {
  const auto& c = host_.cluster();
  Slot& s = slot(round);
  s.committed = true;
  s.committed_block = block;
  if (!c.baseline()) {
    auto cert = quorum_cert(host_.signatures(), shares, c.quorum());
    if (cert) {
      host_.raise_cur_rank(block.rank,
                           std::make_shared<const Certificate>(std::move(*cert)));
    }
  }
  auto inf = inflight_.find(round);
  if (inf != inflight_.end()) inflight_.erase(inf);
  host_.on_partial_commit(block);

  const Round before = committed_prefix_;
  for (auto sit = slots_.find(committed_prefix_ + 1);
       sit != slots_.end() && sit->second.committed;
       sit = slots_.find(committed_prefix_ + 1)) {
    ++committed_prefix_;
  }
  if (committed_prefix_ > before) {
    consecutive_failures_ = 0;
    if (!view_changing()) arm_round_timer();
    const Round keep_from = committed_prefix_ - 2;
    if (keep_from > pruned_below_ + 16) {
      slots_.erase(slots_.begin(), slots_.lower_bound(keep_from));
      rank_msgs_.erase(rank_msgs_.begin(), rank_msgs_.lower_bound(keep_from));
      pruned_below_ = keep_from - 1;
    }
  }
  maybe_send_install_rank();
  try_propose();
}

void PbftInstance::arm_round_timer() {
  const auto& c = host_.cluster();
  if (!host_.proposals_allowed()) {
    disarm_round_timer();
    return;
  }
  if (!c.baseline() && committed_prefix_ > 0) {
    const Block* b = known_block(committed_prefix_);
    if (b && b->rank == host_.epoch().max_rank) {
      disarm_round_timer();
      return;
    }
  }
  const SimTime timeout = c.view_change_timeout
                          << std::min(consecutive_failures_, kMaxBackoffShift);
  host_.set_timer(TimerKind::RoundTimeout, index_, host_.now() + timeout,
                  ++round_token_);
}

void PbftInstance::disarm_round_timer() { ++round_token_; }

void PbftInstance::handle_rank(const MessagePtr& msg) {
  const auto* r = std::get_if<RankMessage>(&msg->body);
  if (!r || r->sender != msg->sender || r->index != index_) return;
  if (r->view > view_) {
    future_.push_back(msg);
    return;
  }
  if (r->view < view_ || host_.cluster().leader_of(index_, r->view) != host_.self()) {
    return;
  }
  if (r->sender == host_.self() || r->round < next_round_ - 1) return;
  if (!host_.signatures().verify(r->sender, r->fingerprint(), r->sig)) return;
  const auto& c = host_.cluster();
  const Rank reported = r->reported();
  if (reported > host_.cur_rank().rank) {
    const RankUpdate up = update_cur_rank(host_.cur_rank(), reported, r->qc,
                                          host_.signatures(), c.quorum());
    if (up.raised) host_.raise_cur_rank(up.cur.rank, up.cur.qc);
    if (up.error != RankError::Ok) return;
  }
  auto& bucket = rank_msgs_[r->round];
  for (const auto& existing : bucket) {
    if (existing.sender == r->sender) return;
  }
  bucket.push_back(*r);
  try_propose();
}

void PbftInstance::handle_timeout() {
  const auto& c = host_.cluster();
  const View target = std::max(view_, vc_target_) + 1;
  vc_target_ = target;
  ViewChangePayload vc;
  vc.last_committed = committed_prefix_;
  for (const auto& [round, s] : slots_) {
    if (round > committed_prefix_ && s.cert) vc.prepared.push_back(*s.cert);
  }
  vc.cur = host_.cur_rank();
  auto m = std::make_shared<Message>();
  m->type = MsgType::ViewChange;
  m->sender = host_.self();
  m->epoch = host_.epoch().epoch;
  m->index = index_;
  m->view = target;
  m->round = committed_prefix_;
  m->sig = host_.signatures().sign(host_.self(), m->fingerprint());
  m->body = std::move(vc);
  host_.record(trace::ViewChange{host_.now(), host_.self(), index_, target});
  ++consecutive_failures_;
  const SimTime timeout = c.view_change_timeout
                          << std::min(consecutive_failures_, kMaxBackoffShift);
  host_.set_timer(TimerKind::RoundTimeout, index_, host_.now() + timeout,
                  ++round_token_);
  host_.send(c.leader_of(index_, target), m);
}

void PbftInstance::handle_view_change(const MessagePtr& msg) {
  const auto& c = host_.cluster();
  const View target = msg->view;
  if (target <= view_ || c.leader_of(index_, target) != host_.self()) return;
  if (!std::holds_alternative<ViewChangePayload>(msg->body)) return;
  if (!host_.signatures().verify(msg->sender, msg->fingerprint(), msg->sig)) return;
  auto& bucket = view_changes_[target];
  bucket.emplace(msg->sender, msg);
  if (bucket.size() < c.quorum() || new_view_sent_.count(target)) return;
  new_view_sent_.insert(target);
  std::vector<MessagePtr> vcs;
  for (const auto& [sender, m] : bucket) {
    if (vcs.size() == c.quorum()) break;
    vcs.push_back(m);
  }
  NewViewPlan plan = plan_new_view(vcs, host_.signatures(), c.quorum());
  auto nv = std::make_shared<Message>();
  nv->type = MsgType::NewView;
  nv->sender = host_.self();
  nv->epoch = host_.epoch().epoch;
  nv->index = index_;
  nv->view = target;
  nv->round = plan.next_round;
  nv->sig = host_.signatures().sign(host_.self(), nv->fingerprint());
  nv->body = NewViewPayload{vcs, plan.reproposals, plan.next_round};
  host_.broadcast(nv);
}

void PbftInstance::handle_new_view(const MessagePtr& msg) {
  const auto* nv = std::get_if<NewViewPayload>(&msg->body);
  const auto& c = host_.cluster();
  if (!nv || msg->view <= view_) return;
  if (msg->sender != c.leader_of(index_, msg->view)) return;
  if (!host_.signatures().verify(msg->sender, msg->fingerprint(), msg->sig)) return;
  std::set<ReplicaId> senders;
  for (const auto& vc : nv->view_changes) {
    if (vc->type != MsgType::ViewChange || vc->view != msg->view ||
        vc->index != index_ ||
        !host_.signatures().verify(vc->sender, vc->fingerprint(), vc->sig)) {
      return;
    }
    senders.insert(vc->sender);
  }
  if (senders.size() < c.quorum()) return;
  NewViewPlan plan = plan_new_view(nv->view_changes, host_.signatures(), c.quorum());
  if (plan.next_round != nv->next_round ||
      plan.reproposals.size() != nv->reproposals.size()) {
    return;
  }
  for (std::size_t i = 0; i < plan.reproposals.size(); ++i) {
    if (plan.reproposals[i].block.digest != nv->reproposals[i].block.digest) return;
  }
  install_view(msg->view, plan);
}

void PbftInstance::install_view(View view, const NewViewPlan& plan) {
  const auto& c = host_.cluster();
  view_ = view;
  vc_target_ = view;
  host_.on_leader_change(index_, leader());
  host_.record(trace::NewView{host_.now(), host_.self(), index_, view,
                              plan.next_round, plan.reproposals.size()});
  for (auto& [round, txs] : inflight_) host_.release_txs(txs);
  inflight_.clear();
  rank_msgs_.clear();
  propose_timer_at_ = -1;
  ++propose_token_;
  bool reproposed_last = false;
  for (const auto& pc : plan.reproposals) {
    const Round r = pc.block.round;
    if (r <= pruned_below_) continue;
    Slot& s = slot(r);
    s.contents.emplace(std::pair(pc.block.digest, pc.block.rank), pc.block);
    if (pc.block.txs) host_.reserve_txs(*pc.block.txs);
    if (r == plan.next_round - 1) reproposed_last = true;
    s.accepted_view = view_;
    s.accepted = pc.block;
    host_.broadcast(make_vote(MsgType::Prepare, r, pc.block));
  }
  next_round_ = plan.next_round;
  nv_wait_commit_ = plan.max_committed;
  stopped_ = false;
  collect_start_ = host_.now();
  install_rank_round_.reset();
  if (!c.baseline() && !reproposed_last && next_round_ > 1) {
    install_rank_round_ = next_round_ - 1;
  }
  arm_round_timer();
  replay_future();
  for (const auto& pc : plan.reproposals) check_prepared(pc.block.round);
  maybe_send_install_rank();
  try_propose();
}

void PbftInstance::maybe_send_install_rank() {
  if (!install_rank_round_) return;
  const Round r = *install_rank_round_;
  if (host_.cluster().rank_mode() == RankMode::Opt && !known_block(r)) return;
  install_rank_round_.reset();
  if (is_leader()) return;
  RankMessage rm = own_rank_message(r);
  auto m = std::make_shared<Message>();
  m->type = MsgType::Rank;
  m->sender = rm.sender;
  m->epoch = rm.epoch;
  m->index = rm.index;
  m->view = rm.view;
  m->round = rm.round;
  m->rank = rm.rank;
  m->sig = rm.sig;
  m->body = std::move(rm);
  host_.send(leader(), m);
}

void PbftInstance::replay_future() {
  std::vector<MessagePtr> pending;
  pending.swap(future_);
  for (const auto& m : pending) {
    if (m->view > view_) {
      future_.push_back(m);
    } else if (m->view == view_) {
      on_message(m);
    }
  }
}

}  // namespace ladon
