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

#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ladon/metrics.hpp"
#include "ladon/scenario.hpp"

namespace ladon {

// Coordinates of one scenario along the comparison dimensions.
struct SweepPoint {
  Protocol protocol = Protocol::LadonPBFT;
  int n = 4;
  int stragglers = 0;
  double k = 1.0;  // straggler slowdown, 1 when there are none
};

SweepPoint sweep_point(const Scenario& s);

struct SweepSpec {
  Scenario base;
  std::vector<Protocol> protocols;
  std::vector<int> ns;
  std::vector<int> stragglers;
  std::vector<double> ks;
};

// {"base": {scenario}, "sweep": {"protocol": [...], "n": [...],
//  "stragglers": [...], "k": [...]}}. At least one non-empty dimension.
SweepSpec sweep_from_json(const nlohmann::json& j);
bool is_sweep(const nlohmann::json& j);

struct SweepMember {
  SweepPoint point;
  Scenario scenario;
};

// Stragglers occupy the highest replica ids and replace any stragglers of the
// base scenario. f follows n.
Scenario apply_point(const Scenario& base, const SweepPoint& point);

std::vector<SweepMember> expand_sweep(const SweepSpec& spec);

// Scenarios given as separate files must agree on everything except the sweep
// dimensions; throws ScenarioError otherwise.
std::vector<SweepMember> members_from_scenarios(const std::vector<Scenario>& scenarios);

struct ComparisonRow {
  SweepPoint point;
  std::string name;
  MetricsReport metrics;
  uint64_t invariant_checks = 0;
  std::optional<std::string> violation;
};

// Runs every member in isolation, up to `threads` at a time. Row order
// follows member order.
std::vector<ComparisonRow> run_comparison(const std::vector<SweepMember>& members,
                                          unsigned threads);

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);

}  // namespace ladon
