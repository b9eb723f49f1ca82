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

#include "ladon/golden.hpp"

#include <memory>
#include <sstream>

#include "ladon/adversary.hpp"
#include "ladon/crypto.hpp"
#include "ladon/epoch.hpp"
#include "ladon/global_ordering.hpp"
#include "ladon/rank_engine.hpp"

namespace ladon {

namespace {

std::string label(const Block& b) {
  return "B_" + std::to_string(b.round) + "^" + std::to_string(b.index);
}

std::string labels(const std::vector<Block>& blocks) {
  std::string out = "<";
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) out += ",";
    out += label(blocks[i]);
  }
  return out + ">";
}

Block blk(InstanceIndex index, Round round, Rank rank) {
  return make_block({static_cast<TxId>(100 * index + round)}, index, round, rank, 0);
}

}  // namespace

GoldenCheck golden_ordering_example() {
  GoldenCheck c{"ordering-example", false, ""};
  OrderingState st = make_ordering_state(3);
  const Block b10 = blk(0, 1, 0), b20 = blk(0, 2, 1), b30 = blk(0, 3, 3);
  const Block b11 = blk(1, 1, 1), b21 = blk(1, 2, 2);
  const Block b12 = blk(2, 1, 1), b22 = blk(2, 2, 4);
  for (const Block& b : {b10, b20, b30, b11, b12}) on_partial_commit(st, b);
  const std::string before = labels(st.g_out);
  const Block at_t1[] = {b21, b22};
  const CommitOutcome out = on_partial_commit(st, std::span<const Block>(at_t1));
  const std::string confirmed = labels(out.confirmed);
  std::ostringstream d;
  d << "before t1 " << before << ", at t1 " << confirmed << ", bar "
    << to_string(st.bar) << ", unconfirmed " << st.unconfirmed.size();
  c.detail = d.str();
  c.passed = out.accepted && before == "<B_1^0,B_2^0,B_1^1,B_1^2>" &&
             confirmed == "<B_2^1,B_3^0>" && st.bar == OrderKey{3, 1} &&
             st.unconfirmed.size() == 1 &&
             st.unconfirmed.begin()->second == b22.id() && st.g_out.size() == 6;
  return c;
}

namespace {

constexpr int kN = 4;
constexpr int kF = 1;
constexpr InstanceIndex kInstance = 1;
constexpr Round kRound = 2;

// Four replicas whose CurRank values are {3,2,2,2}, each backed by a commit
// certificate for a block of that rank.
struct LeaderFixture {
  SimulatedSignatures scheme{7, kN};
  EpochConfig epoch = init_epoch(0, kN, kN, 64);
  RankContext ctx;

  LeaderFixture() {
    ctx.n = kN;
    ctx.f = kF;
    ctx.scheme = &scheme;
  }

  CertPtr commit_qc(Rank rank) const {
    std::vector<SignatureShare> shares;
    Fingerprint fp;
    fp.type = MsgType::Commit;
    fp.round = rank;
    fp.digest = 0xC0FFEE + static_cast<Digest>(rank);
    fp.index = 0;
    fp.rank = rank;
    for (ReplicaId r = 0; r < 2 * kF + 1; ++r) shares.push_back({r, fp, scheme.sign(r, fp)});
    return std::make_shared<const Certificate>(*aggregate(scheme, shares));
  }

  std::vector<RankMessage> reports(View view) const {
    const Rank ranks[kN] = {3, 2, 2, 2};
    std::vector<RankMessage> out;
    for (ReplicaId r = 0; r < kN; ++r) {
      RankMessage m;
      m.sender = r;
      m.view = view;
      m.round = kRound - 1;
      m.index = kInstance;
      m.rank = ranks[r];
      m.qc = commit_qc(ranks[r]);
      sign_rank_message(m, scheme);
      out.push_back(std::move(m));
    }
    return out;
  }

  // Builds the proposal the way a leader does and reports its rank and the
  // validation verdict.
  std::pair<Rank, RankError> propose(ReplicaId leader, View view,
                                     std::vector<RankMessage> set) const {
    PrePreparePayload pp;
    const RankMessage* best = &set.front();
    for (const auto& r : set) {
      if (r.reported() > best->reported()) best = &r;
    }
    pp.rank_m = best->reported();
    pp.rank_qc = best->qc;
    pp.rank_set = make_rank_set(set, RankMode::Plain, scheme);
    const Rank rank = select_rank(pp.rank_set, epoch, pp.rank_set.size()).rank;
    pp.block = make_block({1, 2, 3}, kInstance, kRound, rank, 0);
    Message msg;
    msg.type = MsgType::PrePrepare;
    msg.sender = leader;
    msg.index = kInstance;
    msg.view = view;
    msg.round = kRound;
    msg.digest = pp.block.digest;
    msg.rank = rank;
    msg.body = std::move(pp);
    msg.sig = scheme.sign(leader, msg.fingerprint());
    return {rank, validate_proposal_ranks(msg, epoch, ctx)};
  }
};

GoldenCheck leader_case(const char* name, Rank expected, Rank got, RankError verdict) {
  GoldenCheck c{name, false, ""};
  c.detail = "rank " + std::to_string(got) + " (expected " + std::to_string(expected) +
             "), validation " + to_string(verdict);
  c.passed = got == expected && verdict == RankError::Ok;
  return c;
}

}  // namespace

GoldenCheck golden_honest_leader() {
  LeaderFixture fx;
  auto all = fx.reports(0);
  const ReplicaId leader = 1;
  const RankMessage own = all[leader];
  all.erase(all.begin() + leader);
  const auto [rank, verdict] = fx.propose(leader, 0, honest_rank_subset(own, all, kF));
  return leader_case("honest-leader", 4, rank, verdict);
}

GoldenCheck golden_view_change_leader() {
  LeaderFixture fx;
  // r2 (id 1) is replaced; the new leader r3 (id 2) hears from r1, itself and r4.
  auto all = fx.reports(1);
  const ReplicaId leader = 2;
  const RankMessage own = all[leader];
  const std::vector<RankMessage> others = {all[0], all[3]};
  const auto [rank, verdict] = fx.propose(leader, 1, honest_rank_subset(own, others, kF));
  return leader_case("view-change-leader", 4, rank, verdict);
}

GoldenCheck golden_byzantine_leader() {
  LeaderFixture fx;
  const ReplicaId leader = 1;
  const auto [rank, verdict] = fx.propose(leader, 0, byz_min_rank_filter(fx.reports(0), kF));
  return leader_case("byzantine-leader", 3, rank, verdict);
}

std::vector<GoldenCheck> run_golden_checks() {
  return {golden_ordering_example(), golden_honest_leader(), golden_view_change_leader(),
          golden_byzantine_leader()};
}

}  // namespace ladon
