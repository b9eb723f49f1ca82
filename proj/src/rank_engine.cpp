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

#include "ladon/rank_engine.hpp"

#include <algorithm>
#include <set>

namespace ladon {

const char* to_string(RankError e) {
  switch (e) {
    case RankError::Ok: return "Ok";
    case RankError::QuorumShortfall: return "QuorumShortfall";
    case RankError::StaleRound: return "StaleRound";
    case RankError::BadQC: return "BadQC";
    case RankError::RankMismatch: return "RankMismatch";
    case RankError::DuplicateSender: return "DuplicateSender";
    case RankError::BadSignature: return "BadSignature";
  }
  return "?";
}

RankValidationError::RankValidationError(RankError code)
    : std::runtime_error(std::string("rank validation failed: ") +
                         to_string(code)),
      code_(code) {}

bool rank_proof_valid(const SignatureScheme& scheme, const CertPtr& qc,
                      Rank rank, std::size_t quorum) {
  if (!qc || qc->parts.empty()) return false;
  const auto& fp = qc->parts.front().fingerprint;
  if (fp.type != MsgType::Prepare && fp.type != MsgType::Commit &&
      fp.type != MsgType::Vote) {
    return false;
  }
  if (fp.rank != rank) return false;
  return verify_qc(scheme, *qc, quorum);
}

RankUpdate update_cur_rank(const CurRank& cur, Rank candidate,
                           const CertPtr& proof, const SignatureScheme& scheme,
                           std::size_t quorum) {
  RankUpdate out{cur, false, RankError::Ok};
  if (candidate <= cur.rank) return out;
  if (!rank_proof_valid(scheme, proof, candidate, quorum)) {
    out.error = RankError::BadQC;
    return out;
  }
  out.cur = CurRank{candidate, proof};
  out.raised = true;
  return out;
}

RankSelection select_rank(const RankSet& rank_set, const EpochConfig& epoch,
                          std::size_t required, int32_t K) {
  if (rank_set.size() < required) {
    throw RankValidationError(RankError::QuorumShortfall);
  }
  RankSelection sel;
  if (rank_set.mode == RankMode::Opt && rank_set.aggregate) {
    std::vector<OptEntry> entries;
    std::set<ReplicaId> seen;
    for (const auto& p : rank_set.aggregate->parts) {
      if (!seen.insert(p.signer).second) {
        throw RankValidationError(RankError::DuplicateSender);
      }
      OptEntry e{p.signer, p.fingerprint.key_index, std::nullopt};
      for (const auto& [who, r] : rank_set.explicit_ranks) {
        if (who == p.signer) e.explicit_rank = r;
      }
      entries.push_back(e);
    }
    sel.rank_m = decode_rank_m(
        entries, rank_set.round_rank,
        K > 0 ? K : static_cast<int32_t>(epoch.length));
  } else {
    std::set<ReplicaId> seen;
    const RankMessage* best = nullptr;
    for (const auto& e : rank_set.entries) {
      if (!seen.insert(e.sender).second) {
        throw RankValidationError(RankError::DuplicateSender);
      }
      if (!best || e.reported() > best->reported()) best = &e;
    }
    sel.rank_m = best->reported();
    sel.qc = best->qc;
  }
  sel.rank = std::min(sel.rank_m + 1, epoch.max_rank);
  return sel;
}

RankKey encode_rank_delta(Rank cur_rank, Rank round_rank, int32_t K) {
  if (cur_rank < round_rank) {
    throw std::invalid_argument("cur_rank below round_rank");
  }
  const Rank k = cur_rank - round_rank;
  if (k < K) return RankKey{static_cast<int32_t>(k), std::nullopt};
  return RankKey{K, cur_rank};
}

Rank decode_rank_m(std::span<const OptEntry> entries, Rank round_rank,
                   int32_t K) {
  Rank best = round_rank;
  bool any = false;
  for (const auto& e : entries) {
    Rank r = 0;
    if (e.key_index >= K) {
      if (!e.explicit_rank) {
        throw RankValidationError(RankError::BadSignature);
      }
      r = *e.explicit_rank;
    } else {
      r = round_rank + e.key_index;
    }
    if (!any || r > best) best = r;
    any = true;
  }
  if (!any) throw RankValidationError(RankError::QuorumShortfall);
  return best;
}

std::vector<OptEntry> opt_entries(const SignatureScheme& scheme,
                                  const RankSet& rank_set, int32_t K) {
  if (!rank_set.aggregate || !verify_agg(scheme, *rank_set.aggregate)) {
    throw RankValidationError(RankError::BadSignature);
  }
  std::vector<OptEntry> out;
  for (const auto& p : rank_set.aggregate->parts) {
    OptEntry e{p.signer, p.fingerprint.key_index, std::nullopt};
    if (e.key_index < 0 || e.key_index > K) {
      throw RankValidationError(RankError::BadSignature);
    }
    if (e.key_index == K) {
      for (const auto& [who, r] : rank_set.explicit_ranks) {
        if (who == p.signer) e.explicit_rank = r;
      }
      if (!e.explicit_rank ||
          static_cast<Digest>(*e.explicit_rank) != p.fingerprint.digest) {
        throw RankValidationError(RankError::BadSignature);
      }
    }
    out.push_back(e);
  }
  return out;
}

RankSet make_rank_set(std::vector<RankMessage> messages, RankMode mode,
                      const SignatureScheme& scheme) {
  RankSet rs;
  rs.mode = mode;
  if (mode == RankMode::Plain || messages.size() == 1) {
    rs.mode = RankMode::Plain;
    for (auto& m : messages) {
      m.qc.reset();
      rs.entries.push_back(std::move(m));
    }
    return rs;
  }
  std::vector<SignatureShare> shares;
  for (const auto& m : messages) {
    shares.push_back({m.sender, m.fingerprint(), m.sig});
    if (m.explicit_rank) rs.explicit_ranks.emplace_back(m.sender, *m.explicit_rank);
  }
  rs.round_rank = messages.front().rank;
  auto cert = aggregate(scheme, std::move(shares));
  if (!cert) throw RankValidationError(RankError::BadSignature);
  rs.aggregate = std::make_shared<const Certificate>(std::move(*cert));
  return rs;
}

void sign_rank_message(RankMessage& msg, const SignatureScheme& scheme) {
  msg.sig = scheme.sign(msg.sender, msg.fingerprint());
}

std::vector<RankMessage> honest_rank_subset(const RankMessage& own,
                                            std::vector<RankMessage> others,
                                            int f) {
  std::stable_sort(others.begin(), others.end(),
                   [](const RankMessage& a, const RankMessage& b) {
                     if (a.reported() != b.reported()) {
                       return a.reported() > b.reported();
                     }
                     return a.sender < b.sender;
                   });
  std::vector<RankMessage> out{own};
  for (const auto& m : others) {
    if (out.size() >= static_cast<std::size_t>(2 * f + 1)) break;
    if (m.sender != own.sender) out.push_back(m);
  }
  return out;
}

namespace {

RankError check_plain_entries(const Message& proposal, const RankSet& rs,
                              Round expected_round, bool single_own,
                              const RankContext& ctx, Rank& max_reported,
                              bool check_round) {
  std::set<ReplicaId> seen;
  bool any = false;
  for (const auto& e : rs.entries) {
    if (!seen.insert(e.sender).second) return RankError::DuplicateSender;
    if (e.epoch != proposal.epoch || e.view != proposal.view ||
        e.index != proposal.index || e.mode != RankMode::Plain ||
        (check_round && e.round != expected_round)) {
      return RankError::StaleRound;
    }
    if (single_own && e.sender != proposal.sender) return RankError::StaleRound;
    if (!ctx.scheme->verify(e.sender, e.fingerprint(), e.sig)) {
      return RankError::BadSignature;
    }
    if (!any || e.reported() > max_reported) max_reported = e.reported();
    any = true;
  }
  return RankError::Ok;
}

RankError check_rank_formula(Rank rank_m, const CertPtr& qc, Rank rank,
                             const EpochConfig& epoch, const RankContext& ctx) {
  if (rank_m < epoch.floor_rank()) return RankError::StaleRound;
  if (rank_m != epoch.floor_rank() || qc) {
    if (!rank_proof_valid(*ctx.scheme, qc, rank_m, ctx.quorum())) {
      return RankError::BadQC;
    }
  }
  if (rank != std::min(rank_m + 1, epoch.max_rank) || rank < epoch.min_rank) {
    return RankError::RankMismatch;
  }
  return RankError::Ok;
}

}  // namespace

RankError validate_proposal_ranks(const Message& proposal,
                                  const EpochConfig& epoch,
                                  const RankContext& ctx) {
  if (const auto* pp = std::get_if<PrePreparePayload>(&proposal.body)) {
    const Round round = proposal.round;
    const std::size_t required = round == 1 ? 1 : ctx.quorum();
    const RankSet& rs = pp->rank_set;
    if (rs.size() < required) return RankError::QuorumShortfall;
    Rank from_set = -1;
    if (rs.mode == RankMode::Plain) {
      const RankError e = check_plain_entries(proposal, rs, round - 1,
                                              round == 1, ctx, from_set, true);
      if (e != RankError::Ok) return e;
    } else {
      std::vector<OptEntry> entries;
      try {
        entries = opt_entries(*ctx.scheme, rs, ctx.K);
      } catch (const RankValidationError& err) {
        return err.code();
      }
      for (const auto& p : rs.aggregate->parts) {
        const auto& fp = p.fingerprint;
        if (fp.type != MsgType::Rank || fp.epoch != proposal.epoch ||
            fp.view != proposal.view || fp.round != round - 1 ||
            fp.index != proposal.index || fp.rank != rs.round_rank) {
          return RankError::StaleRound;
        }
      }
      from_set = decode_rank_m(entries, rs.round_rank, ctx.K);
    }
    if (pp->rank_m != from_set) return RankError::RankMismatch;
    if (pp->block.rank != proposal.rank) return RankError::RankMismatch;
    return check_rank_formula(pp->rank_m, pp->rank_qc, proposal.rank, epoch,
                              ctx);
  }
  if (const auto* gp = std::get_if<GenericPayload>(&proposal.body)) {
    if (!gp->node) return RankError::StaleRound;
    if (gp->node->dummy) return RankError::Ok;
    const bool genesis_parent = gp->node->justify == nullptr;
    const std::size_t required = genesis_parent ? 1 : ctx.quorum();
    RankSet rs;
    rs.entries = gp->vote_set;
    if (rs.size() < required) return RankError::QuorumShortfall;
    Rank max_reported = -1;
    const RankError e = check_plain_entries(proposal, rs, 0, genesis_parent,
                                            ctx, max_reported, false);
    if (e != RankError::Ok) return e;
    if (gp->rank_m < max_reported) return RankError::RankMismatch;
    if (gp->node->block.rank != proposal.rank) return RankError::RankMismatch;
    return check_rank_formula(gp->rank_m, gp->rank_qc, proposal.rank, epoch,
                              ctx);
  }
  return RankError::StaleRound;
}

}  // namespace ladon
