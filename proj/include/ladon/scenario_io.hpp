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

#include <json.hpp>
#include <string>

#include "ladon/scenario.hpp"

namespace ladon {

// Scenario files are JSON objects. Every field is optional and defaults to the
// reference configuration; "f" defaults to (n-1)/3. Times carry their unit in
// the key (_ms or _s). Unknown keys are errors.
//
//   name, protocol, n, f, m, epoch_length, batch_size, num_buckets,
//   proposal_interval_ms, view_change_timeout_ms, rank_key_count,
//   duration_s, load_cutoff_s, warmup_s, metrics_window_s, seed,
//   trace_messages, allow_excess_faults,
//   network { regions, intra_delay_ms, inter_delay_ms, jitter_ms, delta_ms,
//             gst_ms, pre_gst_cap_ms },
//   clients { tx_per_second, payload_size, submit_interval_ms },
//   faults [ { replica, kind, k, crash_time_ms, extra_collect } ]
//
// Errors are ScenarioError with the field path, e.g. "faults[1].k: ...".
Scenario scenario_from_json(const nlohmann::json& j);
Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario(const std::string& path);

nlohmann::ordered_json to_json(const Scenario& s);

std::string read_file(const std::string& path);

}  // namespace ladon
