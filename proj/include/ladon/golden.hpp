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

#include <string>
#include <vector>

namespace ladon {

struct GoldenCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Scripted global-ordering example: three instances, B_2^1 and B_2^2 arrive
// together at t1.
GoldenCheck golden_ordering_example();

// Leader behaviour with collected ranks {3,2,2,2}, f = 1.
GoldenCheck golden_honest_leader();
GoldenCheck golden_view_change_leader();
GoldenCheck golden_byzantine_leader();

std::vector<GoldenCheck> run_golden_checks();

}  // namespace ladon
