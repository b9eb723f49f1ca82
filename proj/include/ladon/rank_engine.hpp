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

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ladon/crypto.hpp"
#include "ladon/epoch.hpp"
#include "ladon/messages.hpp"
#include "ladon/types.hpp"

namespace ladon {

enum class RankError : uint8_t {
  Ok,
  QuorumShortfall,
  StaleRound,
  BadQC,
  RankMismatch,
  DuplicateSender,
  BadSignature,
};

const char* to_string(RankError e);

class RankValidationError : public std::runtime_error {
 public:
  explicit RankValidationError(RankError code);
  RankError code() const { return code_; }

 private:
  RankError code_;
};

// True iff `qc` is a quorum certificate over a Prepare, Commit or Vote
// fingerprint carrying exactly `rank`.
bool rank_proof_valid(const SignatureScheme& scheme, const CertPtr& qc,
                      Rank rank, std::size_t quorum);

struct RankUpdate {
  CurRank cur;
  bool raised = false;
  RankError error = RankError::Ok;
};

RankUpdate update_cur_rank(const CurRank& cur, Rank candidate,
                           const CertPtr& proof, const SignatureScheme& scheme,
                           std::size_t quorum);

struct RankSelection {
  Rank rank = 0;
  Rank rank_m = -1;
  CertPtr qc;
};

// Throws RankValidationError on fewer than `required` entries or on repeated
// senders. In opt mode the qc of the selection is null. K <= 0 selects the
// epoch length.
RankSelection select_rank(const RankSet& rank_set, const EpochConfig& epoch,
                          std::size_t required, int32_t K = 0);

struct RankKey {
  int32_t key_index = 0;
  std::optional<Rank> explicit_rank;
};

// Throws std::invalid_argument when cur_rank < round_rank.
RankKey encode_rank_delta(Rank cur_rank, Rank round_rank, int32_t K);

struct OptEntry {
  ReplicaId signer = 0;
  int32_t key_index = 0;
  std::optional<Rank> explicit_rank;
};

Rank decode_rank_m(std::span<const OptEntry> entries, Rank round_rank,
                   int32_t K);

// Opt-mode entries recovered from a rank set aggregate; throws
// RankValidationError(BadSignature) when the aggregate does not verify.
std::vector<OptEntry> opt_entries(const SignatureScheme& scheme,
                                  const RankSet& rank_set, int32_t K);

// Builds the wire form from individually received rank messages.
RankSet make_rank_set(std::vector<RankMessage> messages, RankMode mode,
                      const SignatureScheme& scheme);

struct RankContext {
  int n = 4;
  int f = 1;
  RankMode mode = RankMode::Plain;
  int32_t K = 64;
  const SignatureScheme* scheme = nullptr;

  std::size_t quorum() const { return static_cast<std::size_t>(2 * f + 1); }
};

// Checks the rank proof of a PrePrepare (or Generic) proposal.
RankError validate_proposal_ranks(const Message& proposal,
                                  const EpochConfig& epoch,
                                  const RankContext& ctx);

// Signs a rank message in place.
void sign_rank_message(RankMessage& msg, const SignatureScheme& scheme);

// Honest leader: own message plus the 2f highest-ranked foreign messages.
std::vector<RankMessage> honest_rank_subset(const RankMessage& own,
                                            std::vector<RankMessage> others,
                                            int f);

}  // namespace ladon
