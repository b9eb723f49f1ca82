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

#include "ladon/monitor.hpp"
#include "ladon/scenario.hpp"
#include "ladon/trace.hpp"

namespace ladon {

struct RunOutcome {
  Trace trace;
  std::optional<trace::Violation> violation;
  // Per-replica confirmed logs at run end.
  std::vector<std::vector<BlockId>> logs;
  uint64_t invariant_checks = 0;
};

// Runs the scenario to its duration. Invariant violations end the run early
// and are reported in the outcome (and as the last trace record).
RunOutcome simulate(const Scenario& scenario);

// Same as simulate() but throws InvariantViolation.
Trace run_scenario(const Scenario& scenario);

}  // namespace ladon
