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

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ladon/types.hpp"

namespace ladon {

class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(std::string name, uint64_t event_index, const std::string& detail);
  const std::string& name() const { return name_; }
  uint64_t event_index() const { return event_index_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string name_;
  uint64_t event_index_;
  std::string detail_;
};

// Online safety checks over the observable behavior of non-Byzantine
// replicas. Every check throws InvariantViolation on the first failure.
class InvariantMonitor {
 public:
  // `ranked` enables the rank checks (off for the pre-determined baseline).
  InvariantMonitor(int n, std::vector<bool> byzantine, bool ranked,
                   int64_t epoch_length);

  void set_event_index(uint64_t i) { event_index_ = i; }

  void on_partial_commit(ReplicaId r, const Block& block);
  void on_confirm(ReplicaId r, uint64_t sn, const Block& block,
                  std::optional<OrderKey> bar);
  // Every listed replica must hold the same confirmed log.
  void check_totality(const std::vector<std::pair<ReplicaId, const std::vector<BlockId>*>>& logs);

  uint64_t checks() const { return checks_; }

 private:
  [[noreturn]] void fail(const std::string& name, const std::string& detail) const;

  struct Agreed {
    Digest digest = 0;
    Rank rank = 0;
  };

  int n_;
  std::vector<bool> byzantine_;
  bool ranked_;
  int64_t epoch_length_;
  uint64_t event_index_ = 0;
  uint64_t checks_ = 0;

  // (index, epoch, round) -> committed block
  std::map<std::tuple<InstanceIndex, Epoch, Round>, Agreed> committed_;
  std::map<uint64_t, BlockId> sn_owner_;
  std::vector<std::map<BlockId, uint64_t>> confirmed_by_;  // per replica
  std::vector<std::optional<OrderKey>> last_bar_;
  std::map<BlockId, uint32_t> block_serial_;
  std::vector<uint32_t> tx_owner_;  // tx id -> block serial (0: none)
};

}  // namespace ladon
