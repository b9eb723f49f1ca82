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

#include <stdexcept>
#include <string>
#include <vector>

#include "ladon/adversary.hpp"
#include "ladon/hash.hpp"
#include "ladon/instance_host.hpp"
#include "ladon/types.hpp"

namespace ladon {

// Per-pair latency classes. Replica r sits in region r % regions.
struct NetworkModel {
  int regions = 1;
  SimTime intra_delay = 1 * kMillisecond;
  SimTime inter_delay = 50 * kMillisecond;
  SimTime jitter = 1 * kMillisecond;
  SimTime delta = 100 * kMillisecond;  // post-GST bound
  SimTime gst = 0;
  SimTime pre_gst_cap = 500 * kMillisecond;
};

struct ClientLoad {
  double tx_per_second = 10000.0;
  uint32_t payload_size = 500;
  SimTime submit_interval = 10 * kMillisecond;
};

struct Scenario {
  std::string name = "scenario";
  Protocol protocol = Protocol::LadonPBFT;
  int n = 4;
  int f = 1;
  int m = 0;  // 0: n
  int64_t epoch_length = 64;
  std::size_t batch_size = 4096;
  int num_buckets = 0;  // 0: m
  // 0: m / 16 s, so the total block rate of fast leaders is 16 blocks/s.
  SimTime base_proposal_interval = 0;
  SimTime view_change_timeout = 10 * kSecond;
  int32_t rank_key_count = 64;
  NetworkModel network;
  std::vector<FaultSpec> faults;
  ClientLoad clients;
  SimTime duration = 10 * kSecond;
  SimTime load_cutoff = 0;  // 0: duration (no drain)
  SimTime warmup = 0;
  SimTime metrics_window = 1 * kSecond;
  uint64_t seed = 1;
  bool trace_messages = true;
  // Test mode: lets more than f replicas be faulty.
  bool allow_excess_faults = false;

  int instances() const { return m > 0 ? m : n; }
  int buckets() const { return num_buckets > 0 ? num_buckets : instances(); }
  SimTime proposal_interval() const {
    return base_proposal_interval > 0 ? base_proposal_interval
                                      : instances() * kSecond / 16;
  }
  SimTime cutoff() const { return load_cutoff > 0 ? load_cutoff : duration; }
  ClusterConfig cluster() const;
};

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws ScenarioError naming the offending field.
void validate(const Scenario& s);

SimTime sample_delay(const NetworkModel& net, ReplicaId src, ReplicaId dst,
                     SimTime send_time, Rng& rng);

}  // namespace ladon
