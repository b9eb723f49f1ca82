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

#include "ladon/adversary.hpp"

#include <algorithm>
#include <stdexcept>

#include "ladon/scenario.hpp"

namespace ladon {

const char* to_string(FaultKind k) {
  switch (k) {
    case FaultKind::HonestStraggler: return "HonestStraggler";
    case FaultKind::ByzantineRankMin: return "ByzantineRankMin";
    case FaultKind::Crash: return "Crash";
  }
  return "?";
}

std::optional<FaultKind> parse_fault_kind(const std::string& s) {
  if (s == "HonestStraggler") return FaultKind::HonestStraggler;
  if (s == "ByzantineRankMin") return FaultKind::ByzantineRankMin;
  if (s == "Crash") return FaultKind::Crash;
  return std::nullopt;
}

Behavior behavior_for(const std::vector<FaultSpec>& faults, ReplicaId replica,
                      int n) {
  Behavior b;
  for (const auto& f : faults) {
    if (f.replica != replica) continue;
    switch (f.kind) {
      case FaultKind::HonestStraggler:
        b.straggler = true;
        b.k = f.k;
        break;
      case FaultKind::ByzantineRankMin:
        b.byzantine = true;
        b.k = f.k;
        b.extra_collect = f.extra_collect < 0 ? n : f.extra_collect;
        break;
      case FaultKind::Crash:
        b.crash_time = f.crash_time;
        break;
    }
  }
  return b;
}

SimTime straggler_interval(double k, SimTime base_interval) {
  if (!(k >= 1.0)) throw std::invalid_argument("straggler k must be >= 1");
  return static_cast<SimTime>(k * static_cast<double>(base_interval) + 0.5);
}

std::vector<RankMessage> byz_min_rank_filter(std::vector<RankMessage> collected,
                                             int f) {
  const auto keep = static_cast<std::size_t>(2 * f + 1);
  if (collected.size() < keep) {
    throw std::invalid_argument("fewer than 2f+1 rank messages collected");
  }
  std::sort(collected.begin(), collected.end(),
            [](const RankMessage& a, const RankMessage& b) {
              if (a.reported() != b.reported()) return a.reported() < b.reported();
              return a.sender < b.sender;
            });
  collected.resize(keep);
  return collected;
}

double median_rank(std::vector<Rank> ranks) {
  if (ranks.empty()) throw std::invalid_argument("median of empty set");
  std::sort(ranks.begin(), ranks.end());
  const std::size_t n = ranks.size();
  if (n % 2 == 1) return static_cast<double>(ranks[n / 2]);
  return (static_cast<double>(ranks[n / 2 - 1]) +
          static_cast<double>(ranks[n / 2])) /
         2.0;
}

namespace {

bool subsets_ok(const std::vector<Rank>& v, std::size_t start,
                std::size_t remaining, Rank current_max, bool any,
                double bound) {
  if (remaining == 0) return any && static_cast<double>(current_max) >= bound;
  for (std::size_t i = start; i + remaining <= v.size(); ++i) {
    const Rank m = any ? std::max(current_max, v[i]) : v[i];
    if (!subsets_ok(v, i + 1, remaining - 1, m, true, bound)) return false;
  }
  return true;
}

}  // namespace

bool median_bound_holds(const std::vector<Rank>& collected,
                        const std::vector<Rank>& honest, int f) {
  const auto k = static_cast<std::size_t>(2 * f + 1);
  if (collected.size() < k) throw std::invalid_argument("too few ranks");
  return subsets_ok(collected, 0, k, 0, false, median_rank(honest));
}

Scenario apply_crash(Scenario scenario, ReplicaId replica, SimTime t) {
  FaultSpec spec;
  spec.replica = replica;
  spec.kind = FaultKind::Crash;
  spec.crash_time = t;
  scenario.faults.push_back(spec);
  return scenario;
}

}  // namespace ladon
