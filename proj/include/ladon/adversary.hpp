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
#include <string>
#include <vector>

#include "ladon/messages.hpp"
#include "ladon/types.hpp"

namespace ladon {

enum class FaultKind : uint8_t { HonestStraggler, ByzantineRankMin, Crash };

const char* to_string(FaultKind k);
std::optional<FaultKind> parse_fault_kind(const std::string& s);

struct FaultSpec {
  ReplicaId replica = 0;
  FaultKind kind = FaultKind::HonestStraggler;
  double k = 1.0;
  SimTime crash_time = 0;
  int extra_collect = -1;  // -1: n
};

// Behavioral overrides for one replica, derived from the fault list.
struct Behavior {
  double k = 1.0;
  bool straggler = false;
  bool byzantine = false;
  int extra_collect = 0;
  std::optional<SimTime> crash_time;

  bool honest() const { return !byzantine && !crash_time; }
};

Behavior behavior_for(const std::vector<FaultSpec>& faults, ReplicaId replica,
                      int n);

// Throws std::invalid_argument for k < 1.
SimTime straggler_interval(double k, SimTime base_interval);

// The 2f+1 lowest-ranked messages, ties broken by sender id.
std::vector<RankMessage> byz_min_rank_filter(std::vector<RankMessage> collected,
                                             int f);

// Median of a non-empty multiset; the mean of the two middle values for an
// even count.
double median_rank(std::vector<Rank> ranks);

// Brute force over every (2f+1)-subset of `collected`: true iff the maximum
// of each subset is at least the median of `honest`.
bool median_bound_holds(const std::vector<Rank>& collected,
                        const std::vector<Rank>& honest, int f);

struct Scenario;
Scenario apply_crash(Scenario scenario, ReplicaId replica, SimTime t);

}  // namespace ladon
