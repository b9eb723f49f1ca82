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

#include "ladon/hotstuff_instance.hpp"

#include <algorithm>

#include "ladon/adversary.hpp"
#include "ladon/hash.hpp"

namespace ladon {

namespace {

constexpr int kMaxBackoffShift = 6;
constexpr int kDummyCount = 3;

std::pair<View, int64_t> key_of(const ChainNode& n) { return {n.view, n.height}; }

}  // namespace

NodeId node_id(Epoch epoch, InstanceIndex index, View view, int64_t height,
               NodeId parent, const Block& block, bool dummy) {
  uint64_t h = mix64(static_cast<uint64_t>(epoch));
  h = hash_combine(h, static_cast<uint64_t>(index));
  h = hash_combine(h, static_cast<uint64_t>(view));
  h = hash_combine(h, static_cast<uint64_t>(height));
  h = hash_combine(h, parent);
  h = hash_combine(h, block.digest);
  h = hash_combine(h, static_cast<uint64_t>(block.rank));
  return hash_combine(h, dummy ? 1 : 2);
}

NodePtr make_genesis(Epoch epoch, InstanceIndex index, Rank floor_rank) {
  auto g = std::make_shared<ChainNode>();
  g->block = make_block({}, index, 0, floor_rank, epoch);
  g->id = hash_combine(mix64(static_cast<uint64_t>(epoch) ^ 0x6E5EULL),
                       static_cast<uint64_t>(index));
  return g;
}

Fingerprint vote_fingerprint(const ChainNode& node, InstanceIndex index) {
  Fingerprint fp;
  fp.type = MsgType::Vote;
  fp.epoch = node.block.epoch;
  fp.view = node.view;
  fp.round = node.height;
  fp.digest = node.id;
  fp.index = index;
  fp.rank = node.block.rank;
  return fp;
}

HotStuffInstance::HotStuffInstance(InstanceIndex index, InstanceHost& host)
    : index_(index), host_(host) {}

ReplicaId HotStuffInstance::leader() const {
  return host_.cluster().leader_of(index_, view_);
}

bool HotStuffInstance::is_leader() const { return leader() == host_.self(); }

int64_t HotStuffInstance::committed_height() const {
  return committed_ ? committed_->height : 0;
}

NodePtr HotStuffInstance::find(NodeId id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : it->second;
}

bool HotStuffInstance::extends(const NodePtr& node, const NodePtr& ancestor) const {
  NodePtr x = node;
  while (x && x->height > ancestor->height) x = find(x->parent);
  return x && x->id == ancestor->id;
}

std::pair<int, NodePtr> HotStuffInstance::trailing_dummies(const NodePtr& node) const {
  int count = 0;
  NodePtr x = node;
  while (x && x->dummy) {
    ++count;
    x = find(x->parent);
  }
  return {count, x};
}

bool HotStuffInstance::ancestry_known(const NodePtr& node) const {
  NodePtr x = node;
  while (x && x->height > 0) x = find(x->parent);
  return x && x->id == genesis_->id;
}

void HotStuffInstance::start_epoch() {
  for (const auto& txs : reserved_) host_.release_txs(txs);
  reserved_.clear();
  const EpochConfig& ep = host_.epoch();
  genesis_ = make_genesis(ep.epoch, index_, ep.floor_rank());
  nodes_.clear();
  nodes_.emplace(genesis_->id, genesis_);
  orphans_.clear();
  high_ = locked_ = committed_ = tip_ = genesis_;
  high_qc_.reset();
  tip_qc_.reset();
  tip_reports_.clear();
  votes_.clear();
  new_views_.clear();
  pending_install_.reset();
  last_voted_ = {-1, 0};
  stopped_ = false;
  last_proposed_rank_ = -1;
  vc_target_ = view_;
  consecutive_failures_ = 0;
  collect_start_ = host_.epoch_gen_time();
  arm_round_timer();
  try_propose();
}

void HotStuffInstance::on_message(const MessagePtr& msg) {
  switch (msg->type) {
    case MsgType::Generic: handle_generic(msg); break;
    case MsgType::Vote: handle_vote(msg); break;
    case MsgType::NewView: handle_new_view(msg); break;
    default: break;
  }
}

void HotStuffInstance::on_timer(TimerKind kind, uint64_t token) {
  if (kind == TimerKind::Propose) {
    if (token != propose_token_) return;
    propose_timer_at_ = -1;
    try_propose();
  } else if (token == round_token_) {
    handle_timeout();
  }
}

RankMessage HotStuffInstance::own_report(int64_t height) const {
  const CurRank& cur = host_.cur_rank();
  RankMessage m;
  m.sender = host_.self();
  m.epoch = host_.epoch().epoch;
  m.view = view_;
  m.round = height;
  m.index = index_;
  m.rank = cur.rank;
  m.qc = cur.qc;
  m.sent_at = host_.now();
  sign_rank_message(m, host_.signatures());
  return m;
}

void HotStuffInstance::arm_round_timer() {
  if (!host_.proposals_allowed() ||
      (committed_ && committed_->height > 0 && !committed_->dummy &&
       committed_->block.rank == host_.epoch().max_rank)) {
    ++round_token_;
    return;
  }
  const SimTime timeout = host_.cluster().view_change_timeout
                          << std::min(consecutive_failures_, kMaxBackoffShift);
  host_.set_timer(TimerKind::RoundTimeout, index_, host_.now() + timeout,
                  ++round_token_);
}

void HotStuffInstance::reject(const Message& msg, const char* reason) {
  trace::Reject r;
  r.time = host_.now();
  r.replica = host_.self();
  r.index = index_;
  r.view = msg.view;
  r.round = msg.round;
  r.reason = reason;
  host_.record(std::move(r));
}

void HotStuffInstance::try_propose() {
  const auto& c = host_.cluster();
  if (!is_leader() || stopped_ || view_changing() || pending_install_ ||
      !host_.proposals_allowed()) {
    return;
  }
  const EpochConfig& ep = host_.epoch();
  const Behavior& beh = host_.behavior();
  auto [dummies, real] = trailing_dummies(tip_);
  const bool pad = real && real->height > 0 && real->block.rank == ep.max_rank;
  if (pad && dummies >= kDummyCount) {
    stopped_ = true;
    return;
  }
  const bool from_genesis = tip_->height == 0;
  std::vector<VoteEntry> entries;
  if (!from_genesis && !tip_qc_) {
    auto it = votes_.find(tip_->id);
    if (it == votes_.end() || it->second.size() < c.quorum()) return;
    entries = it->second;
  }
  if (!pad && last_proposal_) {
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

  CertPtr qc = tip_qc_;
  std::vector<RankMessage> pool;
  if (from_genesis) {
    pool = {own_report(0)};
  } else if (tip_qc_) {
    pool = tip_reports_;
  } else {
    for (const auto& e : entries) pool.push_back(e.report);
  }
  std::vector<RankMessage> chosen;
  if (pad) {
    chosen.assign(pool.begin(), pool.begin() + std::min(pool.size(), c.quorum()));
  } else if (from_genesis) {
    chosen = pool;
  } else if (beh.byzantine) {
    chosen = byz_min_rank_filter(pool, c.f);
  } else {
    auto own = std::find_if(pool.begin(), pool.end(), [&](const RankMessage& r) {
      return r.sender == host_.self();
    });
    if (own != pool.end()) {
      chosen = honest_rank_subset(*own, pool, c.f);
    } else {
      chosen.assign(pool.begin(), pool.begin() + std::min(pool.size(), c.quorum()));
    }
  }
  if (!from_genesis && !tip_qc_) {
    std::vector<SignatureShare> shares;
    for (const auto& r : chosen) {
      for (const auto& e : entries) {
        if (e.share.signer == r.sender) shares.push_back(e.share);
      }
    }
    auto cert = aggregate(host_.signatures(), std::move(shares));
    if (!cert) return;
    qc = std::make_shared<const Certificate>(std::move(*cert));
  }
  if (pad) chosen.clear();
  propose(tip_, qc, std::move(chosen), beh.byzantine ? std::move(pool)
                                                     : std::vector<RankMessage>{});
}

void HotStuffInstance::propose(const NodePtr& parent, const CertPtr& qc,
                               std::vector<RankMessage> reports,
                               std::vector<RankMessage> pool) {
  const auto& c = host_.cluster();
  const EpochConfig& ep = host_.epoch();
  const Behavior& beh = host_.behavior();
  auto [dummies, real] = trailing_dummies(parent);
  const bool dummy = real && real->height > 0 && real->block.rank == ep.max_rank;

  GenericPayload gp;
  Rank rank = ep.max_rank;
  trace::Propose rec;
  if (!dummy) {
    if (qc) host_.raise_cur_rank(parent->block.rank, qc);
    if (beh.byzantine) {
      const RankMessage* best = nullptr;
      for (const auto& r : reports) {
        if (!best || r.reported() > best->reported()) best = &r;
      }
      gp.rank_m = best ? best->reported() : ep.floor_rank();
      gp.rank_qc = best ? best->qc : nullptr;
      if (qc && parent->block.rank > gp.rank_m) {
        gp.rank_m = parent->block.rank;
        gp.rank_qc = qc;
      }
      rec.byzantine = true;
      for (const auto& r : pool.empty() ? reports : pool) {
        rec.collected.push_back(r.reported());
        if (!host_.is_byzantine(r.sender)) rec.honest.push_back(r.reported());
      }
    } else {
      for (const auto& r : reports) {
        if (r.reported() <= host_.cur_rank().rank) continue;
        const RankUpdate up = update_cur_rank(host_.cur_rank(), r.reported(), r.qc,
                                              host_.signatures(), c.quorum());
        if (up.raised) host_.raise_cur_rank(up.cur.rank, up.cur.qc);
      }
      gp.rank_m = host_.cur_rank().rank;
      gp.rank_qc = host_.cur_rank().qc;
    }
    rank = std::min(gp.rank_m + 1, ep.max_rank);
    if (beh.byzantine && c.allow_excess_faults && last_proposed_rank_ >= 0) {
      rank = last_proposed_rank_;
    }
    rec.plain_rank_m = gp.rank_m;
  }
  std::vector<TxId> txs;
  if (!dummy && !beh.straggler && !beh.byzantine) txs = host_.cut_batch(index_);
  host_.reserve_txs(txs);
  if (!txs.empty()) reserved_.push_back(txs);

  auto node = std::make_shared<ChainNode>();
  node->parent = parent->id;
  node->height = parent->height + 1;
  node->view = view_;
  node->block = make_block(txs, index_, node->height, rank, ep.epoch);
  node->dummy = dummy;
  node->justify = qc;
  node->id = node_id(ep.epoch, index_, view_, node->height, parent->id,
                     node->block, dummy);

  for (auto& r : reports) r.qc.reset();
  gp.vote_set = std::move(reports);
  gp.node = node;

  auto msg = std::make_shared<Message>();
  msg->type = MsgType::Generic;
  msg->sender = host_.self();
  msg->epoch = ep.epoch;
  msg->index = index_;
  msg->view = view_;
  msg->round = node->height;
  msg->digest = node->id;
  msg->rank = rank;
  msg->sig = host_.signatures().sign(host_.self(), msg->fingerprint());

  rec.time = host_.now();
  rec.replica = host_.self();
  rec.epoch = ep.epoch;
  rec.index = index_;
  rec.view = view_;
  rec.round = node->height;
  rec.rank = rank;
  rec.rank_m = gp.rank_m;
  rec.digest = node->block.digest;
  rec.gen_time = collect_start_;
  rec.tx_count = txs.size();
  rec.rank_units = gp.vote_set.size();
  rec.kept = gp.vote_set.size();
  rec.dummy = dummy;
  msg->body = std::move(gp);

  tip_ = node;
  tip_qc_.reset();
  tip_reports_.clear();
  last_proposal_ = host_.now();
  collect_start_ = host_.now();
  if (!dummy) last_proposed_rank_ = rank;
  host_.record(std::move(rec));
  host_.broadcast(msg);
}

void HotStuffInstance::handle_generic(const MessagePtr& msg) {
  const auto* gp = std::get_if<GenericPayload>(&msg->body);
  // Lower-view nodes are still stored: later views may extend them.
  if (!gp || !gp->node || msg->index != index_) return;
  if (find(gp->node->id)) return;
  NodePtr parent = find(gp->node->parent);
  if (!parent) {
    orphans_.emplace(gp->node->parent, msg);
    return;
  }
  std::vector<NodeId> ready;
  if (process_generic(msg, parent)) ready.push_back(gp->node->id);
  while (!ready.empty()) {
    const NodeId id = ready.back();
    ready.pop_back();
    auto [lo, hi] = orphans_.equal_range(id);
    std::vector<MessagePtr> children;
    for (auto it = lo; it != hi; ++it) children.push_back(it->second);
    orphans_.erase(lo, hi);
    NodePtr p = find(id);
    for (const auto& child : children) {
      const auto& cp = std::get<GenericPayload>(child->body);
      if (find(cp.node->id)) continue;
      if (process_generic(child, p)) ready.push_back(cp.node->id);
    }
  }
  try_install();
}

bool HotStuffInstance::process_generic(const MessagePtr& msg,
                                       const NodePtr& parent) {
  const auto& c = host_.cluster();
  const EpochConfig& ep = host_.epoch();
  const auto& gp = std::get<GenericPayload>(msg->body);
  const ChainNode& node = *gp.node;
  const Block& b = node.block;
  if (msg->sender != c.leader_of(index_, msg->view)) return false;
  if (!host_.signatures().verify(msg->sender, msg->fingerprint(), msg->sig)) {
    reject(*msg, "BadSignature");
    return false;
  }
  if (node.height != parent->height + 1 || node.view != msg->view ||
      msg->round != node.height || msg->digest != node.id || !b.txs ||
      digest_of(*b.txs) != b.digest || b.index != index_ || b.epoch != ep.epoch ||
      b.round != node.height || b.rank != msg->rank ||
      node_id(ep.epoch, index_, node.view, node.height, parent->id, b,
              node.dummy) != node.id) {
    reject(*msg, "malformed");
    return false;
  }
  if (parent->height == 0) {
    if (node.justify) {
      reject(*msg, "BadQC");
      return false;
    }
  } else if (!node.justify || !verify_qc(host_.signatures(), *node.justify, c.quorum()) ||
             !(node.justify->parts.front().fingerprint ==
               vote_fingerprint(*parent, index_))) {
    reject(*msg, "BadQC");
    return false;
  }
  auto [dummies, real] = trailing_dummies(parent);
  const bool after_max = real && real->height > 0 && real->block.rank == ep.max_rank;
  if (node.dummy) {
    if (!after_max || dummies >= kDummyCount || b.tx_count() != 0) {
      reject(*msg, "dummy");
      return false;
    }
  } else {
    if (after_max || (real && real->height > 0 && b.rank <= real->block.rank)) {
      reject(*msg, "RankMismatch");
      return false;
    }
    if (!(host_.behavior().byzantine && host_.is_byzantine(msg->sender))) {
      const RankError err = validate_proposal_ranks(
          *msg, ep, RankContext{c.n, c.f, RankMode::Plain, c.rank_keys,
                                &host_.signatures()});
      if (err != RankError::Ok) {
        reject(*msg, to_string(err));
        return false;
      }
    }
    if (gp.rank_m > host_.cur_rank().rank) {
      const RankUpdate up = update_cur_rank(host_.cur_rank(), gp.rank_m, gp.rank_qc,
                                            host_.signatures(), c.quorum());
      if (up.raised) host_.raise_cur_rank(up.cur.rank, up.cur.qc);
    }
  }
  if (node.justify) host_.raise_cur_rank(parent->block.rank, node.justify);

  if (msg->view > view_) {
    view_ = msg->view;
    vc_target_ = view_;
    pending_install_.reset();
    votes_.clear();
    host_.on_leader_change(index_, leader());
  }
  if (msg->view == view_ && vc_target_ > view_) vc_target_ = view_;
  nodes_.emplace(node.id, gp.node);
  if (msg->view == view_) arm_round_timer();
  update_chain(gp.node);
  vote(gp.node);
  return true;
}

void HotStuffInstance::update_chain(const NodePtr& node) {
  NodePtr b2 = find(node->parent);
  if (!b2 || b2->height == 0) return;
  if (key_of(*b2) > key_of(*high_)) {
    high_ = b2;
    high_qc_ = node->justify;
  }
  NodePtr b1 = find(b2->parent);
  if (!b1 || b1->height == 0) return;
  if (key_of(*b1) > key_of(*locked_)) locked_ = b1;
  NodePtr b0 = find(b1->parent);
  if (!b0 || b0->height == 0 || b0->height <= committed_->height) return;

  trace::HsCommitRule rule;
  rule.time = host_.now();
  rule.replica = host_.self();
  rule.epoch = node->block.epoch;
  rule.index = index_;
  rule.committed_height = b0->height;
  rule.heights = {b0->height, b1->height, b2->height, node->height};
  rule.consecutive_parents = node->parent == b2->id && b2->parent == b1->id &&
                             b1->parent == b0->id;
  const auto certifies = [&](const CertPtr& qc, const NodePtr& n) {
    return qc && qc->parts.front().fingerprint == vote_fingerprint(*n, index_);
  };
  rule.certified = certifies(node->justify, b2) && certifies(b2->justify, b1) &&
                   certifies(b1->justify, b0);
  if (!rule.consecutive_parents || !rule.certified) return;
  if (!extends(b0, committed_)) {
    trace::Reject r;
    r.time = host_.now();
    r.replica = host_.self();
    r.index = index_;
    r.view = node->view;
    r.round = node->height;
    r.reason = "conflict";
    host_.record(std::move(r));
    return;
  }
  host_.record(rule);
  commit_through(b0, b1->justify);
}

void HotStuffInstance::commit_through(const NodePtr& node, const CertPtr& proof) {
  std::vector<std::pair<NodePtr, CertPtr>> path;
  CertPtr qc = proof;
  for (NodePtr x = node; x && x->height > committed_->height; x = find(x->parent)) {
    path.emplace_back(x, qc);
    qc = x->justify;
  }
  std::reverse(path.begin(), path.end());
  for (const auto& [x, cert] : path) {
    if (x->dummy) continue;
    host_.raise_cur_rank(x->block.rank, cert);
    host_.on_partial_commit(x->block);
  }
  committed_ = node;
  consecutive_failures_ = 0;
  arm_round_timer();
}

void HotStuffInstance::vote(const NodePtr& node) {
  if (node->view != view_ || key_of(*node) <= last_voted_) return;
  NodePtr parent = find(node->parent);
  if (!extends(node, locked_) && !(parent && key_of(*parent) > key_of(*locked_))) {
    return;
  }
  last_voted_ = key_of(*node);
  auto m = std::make_shared<Message>();
  m->type = MsgType::Vote;
  m->sender = host_.self();
  m->epoch = node->block.epoch;
  m->index = index_;
  m->view = node->view;
  m->round = node->height;
  m->digest = node->id;
  m->rank = node->block.rank;
  m->sig = host_.signatures().sign(host_.self(), vote_fingerprint(*node, index_));
  m->body = VotePayload{node->id, own_report(node->height)};
  host_.send(leader(), m);
}

void HotStuffInstance::handle_vote(const MessagePtr& msg) {
  const auto* vp = std::get_if<VotePayload>(&msg->body);
  if (!vp || !is_leader() || msg->view != view_ || !tip_ ||
      vp->node != tip_->id || tip_->view != view_) {
    return;
  }
  const Fingerprint fp = vote_fingerprint(*tip_, index_);
  if (!(msg->fingerprint() == fp) ||
      !host_.signatures().verify(msg->sender, fp, msg->sig)) {
    return;
  }
  const RankMessage& r = vp->report;
  if (r.sender != msg->sender || r.view != view_ || r.index != index_ ||
      r.epoch != msg->epoch || r.mode != RankMode::Plain ||
      !host_.signatures().verify(r.sender, r.fingerprint(), r.sig)) {
    return;
  }
  auto& bucket = votes_[tip_->id];
  for (const auto& e : bucket) {
    if (e.share.signer == msg->sender) return;
  }
  bucket.push_back(VoteEntry{{msg->sender, fp, msg->sig}, r});
  if (bucket.size() >= host_.cluster().quorum()) try_propose();
}

void HotStuffInstance::handle_timeout() {
  const auto& c = host_.cluster();
  const View target = std::max(view_, vc_target_) + 1;
  vc_target_ = target;
  RankMessage report = own_report(high_->height);
  report.view = target;
  sign_rank_message(report, host_.signatures());
  auto m = std::make_shared<Message>();
  m->type = MsgType::NewView;
  m->sender = host_.self();
  m->epoch = host_.epoch().epoch;
  m->index = index_;
  m->view = target;
  m->round = high_->height;
  m->digest = high_->id;
  m->sig = host_.signatures().sign(host_.self(), m->fingerprint());
  m->body = HsNewViewPayload{high_, high_qc_, std::move(report)};
  host_.record(trace::ViewChange{host_.now(), host_.self(), index_, target});
  ++consecutive_failures_;
  const SimTime timeout = c.view_change_timeout
                          << std::min(consecutive_failures_, kMaxBackoffShift);
  host_.set_timer(TimerKind::RoundTimeout, index_, host_.now() + timeout,
                  ++round_token_);
  host_.send(c.leader_of(index_, target), m);
}

void HotStuffInstance::handle_new_view(const MessagePtr& msg) {
  const auto& c = host_.cluster();
  const auto* nv = std::get_if<HsNewViewPayload>(&msg->body);
  const View target = msg->view;
  if (!nv || !nv->high_node || target <= view_ ||
      c.leader_of(index_, target) != host_.self()) {
    return;
  }
  if (!host_.signatures().verify(msg->sender, msg->fingerprint(), msg->sig)) return;
  const RankMessage& r = nv->report;
  if (r.sender != msg->sender || r.view != target || r.index != index_ ||
      !host_.signatures().verify(r.sender, r.fingerprint(), r.sig)) {
    return;
  }
  const ChainNode& hn = *nv->high_node;
  if (!nv->high_qc) {
    if (hn.id != genesis_->id) return;
  } else if (!verify_qc(host_.signatures(), *nv->high_qc, c.quorum()) ||
             !(nv->high_qc->parts.front().fingerprint == vote_fingerprint(hn, index_)) ||
             node_id(hn.block.epoch, index_, hn.view, hn.height, hn.parent, hn.block,
                     hn.dummy) != hn.id) {
    return;
  }
  auto& bucket = new_views_[target];
  bucket.emplace(msg->sender, msg);
  if (bucket.size() >= c.quorum() && !pending_install_) {
    pending_install_ = target;
    try_install();
  }
}

void HotStuffInstance::try_install() {
  if (!pending_install_) return;
  const View target = *pending_install_;
  if (target <= view_) {
    pending_install_.reset();
    return;
  }
  const auto& c = host_.cluster();
  const auto& bucket = new_views_[target];
  const HsNewViewPayload* best = nullptr;
  std::vector<RankMessage> reports;
  for (const auto& [sender, m] : bucket) {
    const auto& nv = std::get<HsNewViewPayload>(m->body);
    reports.push_back(nv.report);
    if (!best || key_of(*nv.high_node) > key_of(*best->high_node)) best = &nv;
  }
  NodePtr high = find(best->high_node->id);
  if (!high) {
    if (!find(best->high_node->parent) || !ancestry_known(find(best->high_node->parent))) {
      return;
    }
    high = best->high_node;
    nodes_.emplace(high->id, high);
  } else if (!ancestry_known(high)) {
    return;
  }
  pending_install_.reset();
  view_ = target;
  vc_target_ = target;
  votes_.clear();
  host_.on_leader_change(index_, leader());
  if (key_of(*high) > key_of(*high_)) {
    high_ = high;
    high_qc_ = best->high_qc;
  }
  tip_ = high;
  tip_qc_ = best->high_qc;
  if (reports.size() > c.quorum()) reports.resize(c.quorum());
  tip_reports_ = std::move(reports);
  stopped_ = false;
  reserve_branch_txs();
  collect_start_ = host_.now();
  host_.record(trace::NewView{host_.now(), host_.self(), index_, target,
                              high->height + 1, 0});
  arm_round_timer();
  try_propose();
}

void HotStuffInstance::reserve_branch_txs() {
  std::vector<NodePtr> open;
  for (const auto& [id, n] : nodes_) {
    if (n->height > committed_->height && n->block.tx_count() > 0) open.push_back(n);
  }
  std::sort(open.begin(), open.end(), [](const NodePtr& a, const NodePtr& b) {
    return std::pair(a->height, a->id) < std::pair(b->height, b->id);
  });
  for (const auto& n : open) {
    std::vector<TxId> txs(n->block.txs->begin(), n->block.txs->end());
    host_.reserve_txs(txs);
    reserved_.push_back(std::move(txs));
  }
}

}  // namespace ladon
