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

#include "ladon/trace.hpp"

#include <ostream>
#include <stdexcept>

namespace ladon {

namespace {

class Line {
 public:
  explicit Line(const char* kind) : s_(kind) {}

  template <typename T>
  Line& kv(const char* key, T value) {
    s_ += ' ';
    s_ += key;
    s_ += '=';
    if constexpr (std::is_same_v<T, bool>) {
      s_ += value ? '1' : '0';
    } else if constexpr (std::is_same_v<T, const char*>) {
      s_ += value;
    } else if constexpr (std::is_same_v<T, std::string>) {
      s_ += value;
    } else {
      s_ += std::to_string(value);
    }
    return *this;
  }

  template <typename T>
  Line& list(const char* key, const std::vector<T>& values) {
    s_ += ' ';
    s_ += key;
    s_ += '=';
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) s_ += ',';
      s_ += std::to_string(values[i]);
    }
    return *this;
  }

  std::string str() { return std::move(s_); }

 private:
  std::string s_;
};

}  // namespace

const trace::Config& Trace::config() const {
  for (const auto& r : records) {
    if (const auto* c = std::get_if<trace::Config>(&r)) return *c;
  }
  throw std::logic_error("trace has no config record");
}

std::string to_line(const TraceRecord& record) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, trace::Config>) {
          return Line("Config")
              .kv("protocol", r.protocol)
              .kv("n", r.n)
              .kv("f", r.f)
              .kv("m", r.m)
              .kv("l", r.epoch_length)
              .kv("interval", r.base_interval)
              .kv("duration", r.duration)
              .kv("cutoff", r.load_cutoff)
              .kv("warmup", r.warmup)
              .kv("seed", r.seed)
              .list("honest", r.honest)
              .list("byzantine", r.byzantine)
              .str();
        } else if constexpr (std::is_same_v<T, trace::ClientSubmit>) {
          return Line("ClientSubmit")
              .kv("t", r.time)
              .kv("first", r.first)
              .kv("count", r.count)
              .str();
        } else if constexpr (std::is_same_v<T, trace::Propose>) {
          return Line("Propose")
              .kv("t", r.time)
              .kv("r", r.replica)
              .kv("e", r.epoch)
              .kv("i", r.index)
              .kv("v", r.view)
              .kv("n", r.round)
              .kv("d", r.digest)
              .kv("rank", r.rank)
              .kv("rank_m", r.rank_m)
              .kv("plain_rank_m", r.plain_rank_m)
              .kv("gen", r.gen_time)
              .kv("txs", r.tx_count)
              .kv("units", r.rank_units)
              .kv("kept", r.kept)
              .kv("dummy", r.dummy)
              .kv("repropose", r.reproposal)
              .kv("byz", r.byzantine)
              .list("collected", r.collected)
              .list("honest", r.honest)
              .str();
        } else if constexpr (std::is_same_v<T, trace::Reject>) {
          return Line("RejectedProposal")
              .kv("t", r.time)
              .kv("r", r.replica)
              .kv("i", r.index)
              .kv("v", r.view)
              .kv("n", r.round)
              .kv("reason", r.reason)
              .str();
        } else if constexpr (std::is_same_v<T, trace::PartialCommit>) {
          return Line("PartialCommit")
              .kv("t", r.time)
              .kv("r", r.replica)
              .kv("e", r.epoch)
              .kv("i", r.index)
              .kv("n", r.round)
              .kv("rank", r.rank)
              .kv("d", r.digest)
              .kv("txs", r.tx_count)
              .str();
        } else if constexpr (std::is_same_v<T, trace::BlockContent>) {
          return Line("BlockContent")
              .kv("e", r.epoch)
              .kv("i", r.index)
              .kv("n", r.round)
              .list("txs", r.txs)
              .str();
        } else if constexpr (std::is_same_v<T, trace::GlobalConfirm>) {
          return Line("GlobalConfirm")
              .kv("t", r.time)
              .kv("r", r.replica)
              .kv("sn", r.sn)
              .kv("e", r.epoch)
              .kv("i", r.index)
              .kv("n", r.round)
              .kv("rank", r.rank)
              .kv("bar_rank", r.bar.rank)
              .kv("bar_index", r.bar.index)
              .str();
        } else if constexpr (std::is_same_v<T, trace::RankUpdate>) {
          return Line("RankUpdate")
              .kv("t", r.time)
              .kv("r", r.replica)
              .kv("rank", r.rank)
              .str();
        } else if constexpr (std::is_same_v<T, trace::ViewChange>) {
          return Line("ViewChange")
              .kv("t", r.time)
              .kv("r", r.replica)
              .kv("i", r.index)
              .kv("v", r.new_view)
              .str();
        } else if constexpr (std::is_same_v<T, trace::NewView>) {
          return Line("NewView")
              .kv("t", r.time)
              .kv("r", r.replica)
              .kv("i", r.index)
              .kv("v", r.view)
              .kv("next", r.next_round)
              .kv("repropose", r.reproposals)
              .str();
        } else if constexpr (std::is_same_v<T, trace::EpochChange>) {
          return Line("EpochChange")
              .kv("t", r.time)
              .kv("r", r.replica)
              .kv("e", r.epoch)
              .str();
        } else if constexpr (std::is_same_v<T, trace::Checkpoint>) {
          return Line("Checkpoint")
              .kv("t", r.time)
              .kv("r", r.replica)
              .kv("e", r.epoch)
              .kv("stable", r.stable)
              .str();
        } else if constexpr (std::is_same_v<T, trace::MessageEvent>) {
          return Line("Message")
              .kv("t", r.send_time)
              .kv("deliver", r.deliver_time)
              .kv("src", r.src)
              .kv("dst", r.dst)
              .kv("type", to_string(r.type))
              .kv("i", r.index)
              .kv("n", r.round)
              .kv("bytes", r.bytes)
              .kv("units", r.rank_units)
              .kv("auth", r.auth_ops)
              .str();
        } else if constexpr (std::is_same_v<T, trace::HsCommitRule>) {
          return Line("HsCommitRule")
              .kv("t", r.time)
              .kv("r", r.replica)
              .kv("e", r.epoch)
              .kv("i", r.index)
              .kv("h", r.committed_height)
              .kv("b", r.heights[0])
              .kv("b1", r.heights[1])
              .kv("b2", r.heights[2])
              .kv("b3", r.heights[3])
              .kv("consecutive", r.consecutive_parents)
              .kv("certified", r.certified)
              .str();
        } else if constexpr (std::is_same_v<T, trace::Crash>) {
          return Line("Crash").kv("t", r.time).kv("r", r.replica).str();
        } else {
          return Line("Violation")
              .kv("t", r.time)
              .kv("event", r.event_index)
              .kv("invariant", r.invariant)
              .kv("detail", r.detail)
              .str();
        }
      },
      record);
}

void write_trace(std::ostream& os, const Trace& trace) {
  for (const auto& r : trace.records) os << to_line(r) << '\n';
}

}  // namespace ladon
