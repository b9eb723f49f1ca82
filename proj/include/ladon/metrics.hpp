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

#include <array>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ladon/trace.hpp"
#include "ladon/types.hpp"

namespace ladon {

struct AnalyticalRates {
  double ladon = 0.0;     // R = 1/k + m - 1
  double baseline = 0.0;  // R' = m/k
};

// Per-round confirmation rates with one straggler of slowdown k.
AnalyticalRates analytical_rates(int m, double k);

// e^(-N/n); nullopt for an empty sequence.
std::optional<double> causal_strength_value(uint64_t inversions, uint64_t n);

// Pairs i < j with gen[i] > commit[j], counted with a Fenwick tree.
uint64_t count_inversions(const std::vector<SimTime>& gen,
                          const std::vector<SimTime>& commit);

// (f+1)-th distinct replica time; duplicates per replica count once.
std::optional<SimTime> reply_quorum_time(
    std::vector<std::pair<ReplicaId, SimTime>> replies, int f);

struct BlockTimes {
  std::map<BlockId, SimTime> reply;        // (f+1)-th GlobalConfirm
  std::map<BlockId, SimTime> commit_f1;    // (f+1)-th PartialCommit
  std::map<BlockId, SimTime> commit_2f1;   // (2f+1)-th PartialCommit
  std::map<BlockId, const trace::Propose*> proposal;
  std::map<BlockId, const trace::BlockContent*> content;
};

BlockTimes block_times(const Trace& trace);

// First honest replica of the run (replica 0 if none is honest).
ReplicaId reference_replica(const Trace& trace);

struct CausalStrength {
  std::optional<double> cs;
  uint64_t inversions = 0;
  uint64_t blocks = 0;
};

CausalStrength causal_strength(const Trace& trace);
// `limit` keeps only the first blocks of the reference log, so runs of
// different speed can be compared over the same log length.
CausalStrength causal_strength(const Trace& trace, const BlockTimes& times,
                               std::size_t limit = std::numeric_limits<std::size_t>::max());

struct LatencyStats {
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p99_ms = 0.0;
  uint64_t resolved = 0;
  uint64_t unresolved = 0;
};

struct MessageStats {
  std::array<MessageTotals, kMsgTypeCount> per_type{};
  MessageTotals total;
};

MessageStats count_messages(const Trace& trace);

struct MetricsReport {
  SimTime window = 0;
  std::vector<double> throughput;  // tx/s per window
  double throughput_mean = 0.0;    // windows inside [warmup, cutoff)
  double throughput_peak = 0.0;
  LatencyStats latency;
  CausalStrength cs;
  double round_rate = 0.0;  // confirmed blocks per base interval
  std::vector<int64_t> queued_blocks;  // sampled at window ends
  MessageStats messages;
};

MetricsReport compute_metrics(const Trace& trace, SimTime window);

// Blocks confirmed at `replica` per base interval inside [from, to).
double round_rate(const Trace& trace, ReplicaId replica, SimTime from, SimTime to);

// Partially committed but not yet confirmed blocks at `replica`, sampled at
// multiples of `step`.
std::vector<int64_t> queued_blocks_series(const Trace& trace, ReplicaId replica,
                                          SimTime step);

struct FloorReport {
  uint64_t checked = 0;
  uint64_t violations = 0;
  uint64_t median_checked = 0;
  uint64_t median_violations = 0;
  std::string first_violation;
};

// Every committed block's rank is at least the rank of each block committed
// by 2f+1 replicas before its generation time; every Byzantine collection
// respects the honest-median bound.
FloorReport check_byzantine_floor(const Trace& trace);

struct HotStuffReport {
  uint64_t rules = 0;
  uint64_t bad_rules = 0;
  uint64_t uncovered_commits = 0;  // commits without a covering 3-chain
  uint64_t dummies = 0;
  uint64_t dummies_confirmed = 0;
  uint64_t completed_instances = 0;  // (epoch, index) with a committed maxRank block
  uint64_t expected_instances = 0;
};

HotStuffReport check_hotstuff_structure(const Trace& trace);

void write_metrics_csv(std::ostream& os, const std::string& scenario,
                       const MetricsReport& report);
void write_series_csv(std::ostream& os, SimTime window,
                      const std::vector<double>& values);

}  // namespace ladon
