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

#include "ladon/scenario.hpp"

#include <algorithm>
#include <set>

namespace ladon {

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::LadonPBFT: return "LadonPBFT";
    case Protocol::LadonOpt: return "LadonOpt";
    case Protocol::LadonHotStuff: return "LadonHotStuff";
    case Protocol::BaselinePredetermined: return "BaselinePredetermined";
  }
  return "?";
}

std::optional<Protocol> parse_protocol(const std::string& s) {
  for (Protocol p : {Protocol::LadonPBFT, Protocol::LadonOpt,
                     Protocol::LadonHotStuff, Protocol::BaselinePredetermined}) {
    if (s == to_string(p)) return p;
  }
  if (s == "Baseline") return Protocol::BaselinePredetermined;
  return std::nullopt;
}

ClusterConfig Scenario::cluster() const {
  ClusterConfig c;
  c.n = n;
  c.f = f;
  c.m = instances();
  c.protocol = protocol;
  c.rank_keys = rank_key_count;
  c.batch_size = batch_size;
  c.base_interval = proposal_interval();
  c.view_change_timeout = view_change_timeout;
  c.allow_excess_faults = allow_excess_faults;
  return c;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ScenarioError(what);
}

}  // namespace

void validate(const Scenario& s) {
  require(s.f >= 0, "f: must be non-negative");
  require(s.n == 3 * s.f + 1, "n: must equal 3f+1 (n=" + std::to_string(s.n) +
                                  ", f=" + std::to_string(s.f) + ")");
  require(s.m >= 0 && s.instances() <= s.n, "m: must be in [1, n]");
  require(s.num_buckets >= 0, "num_buckets: must be non-negative");
  require(s.epoch_length > 0, "epoch_length: must be positive");
  require(s.batch_size > 0, "batch_size: must be positive");
  require(s.base_proposal_interval >= 0, "base_proposal_interval: negative");
  require(s.view_change_timeout > 0, "view_change_timeout: must be positive");
  require(s.rank_key_count >= 1, "rank_key_count: must be at least 1");
  require(s.duration > 0, "duration: must be positive");
  require(s.load_cutoff >= 0 && s.load_cutoff <= s.duration,
          "load_cutoff: must be within [0, duration]");
  require(s.warmup >= 0 && s.warmup < s.duration, "warmup: must be below duration");
  require(s.metrics_window > 0, "metrics_window: must be positive");
  require(s.clients.tx_per_second >= 0, "clients.tx_per_second: negative");
  require(s.clients.submit_interval > 0, "clients.submit_interval: must be positive");
  const auto& net = s.network;
  require(net.regions >= 1, "network.regions: must be at least 1");
  require(net.intra_delay >= 0 && net.inter_delay >= 0 && net.jitter >= 0,
          "network: delays must be non-negative");
  require(net.delta >= std::max(net.intra_delay, net.inter_delay),
          "network.delta: below the base delay");
  require(net.pre_gst_cap >= std::max(net.intra_delay, net.inter_delay),
          "network.pre_gst_cap: below the base delay");
  require(net.gst >= 0, "network.gst: negative");

  std::set<ReplicaId> faulty;
  for (std::size_t i = 0; i < s.faults.size(); ++i) {
    const FaultSpec& fs = s.faults[i];
    const std::string path = "faults[" + std::to_string(i) + "]";
    require(fs.replica >= 0 && fs.replica < s.n, path + ".replica: out of range");
    require(faulty.insert(fs.replica).second,
            path + ".replica: replica already has a fault");
    if (fs.kind != FaultKind::Crash) {
      require(fs.k >= 1.0, path + ".k: must be at least 1");
      require(straggler_interval(fs.k, s.proposal_interval()) < s.view_change_timeout,
              path + ".k: k * base_proposal_interval must stay below "
                     "view_change_timeout");
    } else {
      require(fs.crash_time >= 0 && fs.crash_time <= s.duration,
              path + ".crash_time: outside the run");
    }
  }
  if (!s.allow_excess_faults) {
    require(static_cast<int>(faulty.size()) <= s.f,
            "faults: " + std::to_string(faulty.size()) + " faulty replicas exceeds f=" +
                std::to_string(s.f));
  }
}

SimTime sample_delay(const NetworkModel& net, ReplicaId src, ReplicaId dst,
                     SimTime send_time, Rng& rng) {
  if (src == dst) return 0;
  const bool same = src % net.regions == dst % net.regions;
  const SimTime base = same ? net.intra_delay : net.inter_delay;
  if (send_time < net.gst) {
    return rng.uniform_int(base, std::max(base, net.pre_gst_cap));
  }
  return std::min(base + rng.uniform_int(0, net.jitter), net.delta);
}

}  // namespace ladon
