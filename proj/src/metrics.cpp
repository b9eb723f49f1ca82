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

#include "ladon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>
#include <tuple>

#include "ladon/adversary.hpp"
#include "ladon/epoch.hpp"

namespace ladon {

AnalyticalRates analytical_rates(int m, double k) {
  return AnalyticalRates{1.0 / k + (m - 1), m / k};
}

std::optional<double> causal_strength_value(uint64_t inversions, uint64_t n) {
  if (n == 0) return std::nullopt;
  return std::exp(-static_cast<double>(inversions) / static_cast<double>(n));
}

uint64_t count_inversions(const std::vector<SimTime>& gen,
                          const std::vector<SimTime>& commit) {
  std::vector<SimTime> keys = gen;
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<uint64_t> tree(keys.size() + 1, 0);
  const auto add = [&](std::size_t pos) {
    for (++pos; pos < tree.size(); pos += pos & (~pos + 1)) ++tree[pos];
  };
  const auto prefix = [&](std::size_t count) {
    uint64_t s = 0;
    for (; count > 0; count -= count & (~count + 1)) s += tree[count];
    return s;
  };
  uint64_t inversions = 0;
  for (std::size_t j = 0; j < gen.size(); ++j) {
    const std::size_t not_after =
        static_cast<std::size_t>(std::upper_bound(keys.begin(), keys.end(), commit[j]) -
                                 keys.begin());
    inversions += j - prefix(not_after);
    add(static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), gen[j]) -
                                 keys.begin()));
  }
  return inversions;
}

std::optional<SimTime> reply_quorum_time(
    std::vector<std::pair<ReplicaId, SimTime>> replies, int f) {
  std::map<ReplicaId, SimTime> first;
  for (const auto& [r, t] : replies) {
    auto [it, fresh] = first.emplace(r, t);
    if (!fresh) it->second = std::min(it->second, t);
  }
  std::vector<SimTime> times;
  for (const auto& [r, t] : first) times.push_back(t);
  if (times.size() < static_cast<std::size_t>(f + 1)) return std::nullopt;
  std::sort(times.begin(), times.end());
  return times[static_cast<std::size_t>(f)];
}

namespace {

using Replies = std::vector<std::pair<ReplicaId, SimTime>>;

std::optional<SimTime> kth(Replies replies, int k) {
  return reply_quorum_time(std::move(replies), k - 1);
}

}  // namespace

BlockTimes block_times(const Trace& trace) {
  const trace::Config& cfg = trace.config();
  BlockTimes out;
  std::map<BlockId, Replies> commits;
  std::map<BlockId, Replies> confirms;
  std::map<BlockId, std::pair<Digest, Rank>> digests;
  std::map<BlockId, std::vector<const trace::Propose*>> proposals;
  for (const auto& rec : trace.records) {
    if (const auto* p = std::get_if<trace::PartialCommit>(&rec)) {
      const BlockId id{p->epoch, p->index, p->round};
      commits[id].emplace_back(p->replica, p->time);
      digests.emplace(id, std::pair(p->digest, p->rank));
    } else if (const auto* g = std::get_if<trace::GlobalConfirm>(&rec)) {
      confirms[BlockId{g->epoch, g->index, g->round}].emplace_back(g->replica, g->time);
    } else if (const auto* pr = std::get_if<trace::Propose>(&rec)) {
      proposals[BlockId{pr->epoch, pr->index, pr->round}].push_back(pr);
    } else if (const auto* bc = std::get_if<trace::BlockContent>(&rec)) {
      out.content.emplace(BlockId{bc->epoch, bc->index, bc->round}, bc);
    }
  }
  for (const auto& [id, replies] : commits) {
    if (auto t = kth(replies, cfg.f + 1)) out.commit_f1.emplace(id, *t);
    if (auto t = kth(replies, 2 * cfg.f + 1)) out.commit_2f1.emplace(id, *t);
    auto pit = proposals.find(id);
    if (pit == proposals.end()) continue;
    const auto [d, rank] = digests.at(id);
    for (auto it = pit->second.rbegin(); it != pit->second.rend(); ++it) {
      if ((*it)->digest == d && (*it)->rank == rank) {
        out.proposal.emplace(id, *it);
        break;
      }
    }
  }
  for (const auto& [id, replies] : confirms) {
    if (auto t = reply_quorum_time(replies, cfg.f)) out.reply.emplace(id, *t);
  }
  return out;
}

ReplicaId reference_replica(const Trace& trace) {
  const auto& honest = trace.config().honest;
  return honest.empty() ? 0 : honest.front();
}

CausalStrength causal_strength(const Trace& trace) {
  return causal_strength(trace, block_times(trace));
}

CausalStrength causal_strength(const Trace& trace, const BlockTimes& times,
                               std::size_t limit) {
  const ReplicaId ref = reference_replica(trace);
  std::vector<std::pair<uint64_t, BlockId>> order;
  for (const auto* g : trace.all<trace::GlobalConfirm>()) {
    if (g->replica == ref) order.emplace_back(g->sn, BlockId{g->epoch, g->index, g->round});
  }
  std::sort(order.begin(), order.end());
  if (order.size() > limit) order.resize(limit);
  std::vector<SimTime> gen;
  std::vector<SimTime> commit;
  for (const auto& [sn, id] : order) {
    auto p = times.proposal.find(id);
    auto c = times.commit_f1.find(id);
    gen.push_back(p != times.proposal.end() ? p->second->gen_time : 0);
    commit.push_back(c != times.commit_f1.end() ? c->second
                                                : std::numeric_limits<SimTime>::max());
  }
  CausalStrength cs;
  cs.blocks = order.size();
  cs.inversions = count_inversions(gen, commit);
  cs.cs = causal_strength_value(cs.inversions, cs.blocks);
  return cs;
}

MessageStats count_messages(const Trace& trace) {
  MessageStats s;
  s.per_type = trace.message_totals;
  for (const auto& t : s.per_type) {
    s.total.count += t.count;
    s.total.bytes += t.bytes;
    s.total.rank_units += t.rank_units;
    s.total.auth_ops += t.auth_ops;
  }
  return s;
}

double round_rate(const Trace& trace, ReplicaId replica, SimTime from, SimTime to) {
  const auto& cfg = trace.config();
  if (to <= from || cfg.base_interval <= 0) return 0.0;
  uint64_t count = 0;
  for (const auto* g : trace.all<trace::GlobalConfirm>()) {
    if (g->replica == replica && g->time >= from && g->time < to) ++count;
  }
  return static_cast<double>(count) * static_cast<double>(cfg.base_interval) /
         static_cast<double>(to - from);
}

std::vector<int64_t> queued_blocks_series(const Trace& trace, ReplicaId replica,
                                          SimTime step) {
  const SimTime duration = trace.config().duration;
  std::vector<int64_t> out;
  int64_t queued = 0;
  SimTime next = step;
  for (const auto& rec : trace.records) {
    SimTime t = -1;
    int64_t delta = 0;
    if (const auto* p = std::get_if<trace::PartialCommit>(&rec)) {
      if (p->replica == replica) { t = p->time; delta = 1; }
    } else if (const auto* g = std::get_if<trace::GlobalConfirm>(&rec)) {
      if (g->replica == replica) { t = g->time; delta = -1; }
    }
    if (t < 0) continue;
    while (t >= next && next <= duration) {
      out.push_back(queued);
      next += step;
    }
    queued += delta;
  }
  while (next <= duration) {
    out.push_back(queued);
    next += step;
  }
  return out;
}

namespace {

LatencyStats latency_stats(const Trace& trace, const BlockTimes& times) {
  struct Range {
    TxId first;
    uint64_t count;
    SimTime time;
  };
  std::vector<Range> ranges;
  uint64_t submitted = 0;
  for (const auto* c : trace.all<trace::ClientSubmit>()) {
    ranges.push_back({c->first, c->count, c->time});
    submitted += c->count;
  }
  std::vector<SimTime> lat;
  for (const auto& [id, t] : times.reply) {
    auto c = times.content.find(id);
    if (c == times.content.end()) continue;
    for (TxId tx : c->second->txs) {
      auto it = std::upper_bound(ranges.begin(), ranges.end(), tx,
                                 [](TxId v, const Range& r) { return v < r.first; });
      if (it == ranges.begin()) continue;
      --it;
      if (tx >= it->first + it->count) continue;
      lat.push_back(t - it->time);
    }
  }
  LatencyStats s;
  s.resolved = lat.size();
  s.unresolved = submitted > lat.size() ? submitted - lat.size() : 0;
  if (lat.empty()) return s;
  std::sort(lat.begin(), lat.end());
  double sum = 0.0;
  for (SimTime v : lat) sum += static_cast<double>(v);
  const auto pct = [&](double q) {
    const auto i = static_cast<std::size_t>(q * static_cast<double>(lat.size() - 1));
    return static_cast<double>(lat[i]) / kMillisecond;
  };
  s.mean_ms = sum / static_cast<double>(lat.size()) / kMillisecond;
  s.p50_ms = pct(0.5);
  s.p99_ms = pct(0.99);
  return s;
}

}  // namespace

MetricsReport compute_metrics(const Trace& trace, SimTime window) {
  const auto& cfg = trace.config();
  const BlockTimes times = block_times(trace);
  MetricsReport r;
  r.window = window;
  const auto windows = static_cast<std::size_t>((cfg.duration + window - 1) / window);
  std::vector<uint64_t> txs(windows, 0);
  for (const auto& [id, t] : times.reply) {
    auto c = times.content.find(id);
    if (c == times.content.end()) continue;
    const auto w = static_cast<std::size_t>(t / window);
    if (w < windows) txs[w] += c->second->txs.size();
  }
  const double secs = static_cast<double>(window) / kSecond;
  double sum = 0.0;
  int counted = 0;
  for (std::size_t w = 0; w < windows; ++w) {
    const double v = static_cast<double>(txs[w]) / secs;
    r.throughput.push_back(v);
    r.throughput_peak = std::max(r.throughput_peak, v);
    const SimTime start = static_cast<SimTime>(w) * window;
    if (start >= cfg.warmup && start + window <= cfg.load_cutoff) {
      sum += v;
      ++counted;
    }
  }
  r.throughput_mean = counted ? sum / counted : 0.0;
  r.latency = latency_stats(trace, times);
  r.cs = causal_strength(trace, times);
  const ReplicaId ref = reference_replica(trace);
  r.round_rate = round_rate(trace, ref, cfg.warmup, cfg.load_cutoff);
  r.queued_blocks = queued_blocks_series(trace, ref, window);
  r.messages = count_messages(trace);
  return r;
}

FloorReport check_byzantine_floor(const Trace& trace) {
  const auto& cfg = trace.config();
  FloorReport rep;
  if (cfg.protocol == "BaselinePredetermined") return rep;
  const BlockTimes times = block_times(trace);
  std::map<BlockId, Rank> rank_of;
  for (const auto* p : trace.all<trace::PartialCommit>()) {
    rank_of.emplace(BlockId{p->epoch, p->index, p->round}, p->rank);
  }
  std::vector<std::pair<SimTime, Rank>> quorum;
  for (const auto& [id, t] : times.commit_2f1) quorum.emplace_back(t, rank_of.at(id));
  std::sort(quorum.begin(), quorum.end());
  std::vector<Rank> prefix_max;
  for (const auto& [t, rank] : quorum) {
    prefix_max.push_back(prefix_max.empty() ? rank : std::max(prefix_max.back(), rank));
  }
  for (const auto& [id, p] : times.proposal) {
    if (p->dummy) continue;
    ++rep.checked;
    const auto n = static_cast<std::size_t>(
        std::lower_bound(quorum.begin(), quorum.end(), std::pair(p->gen_time, Rank{-1})) -
        quorum.begin());
    if (n == 0) continue;
    const Rank floor = prefix_max[n - 1];
    if (p->rank < floor) {
      if (rep.violations++ == 0) {
        rep.first_violation = to_string(id) + " rank " + std::to_string(p->rank) +
                              " below floor " + std::to_string(floor);
      }
    }
  }
  const auto quorum_size = static_cast<std::size_t>(2 * cfg.f + 1);
  for (const auto* p : trace.all<trace::Propose>()) {
    if (!p->byzantine || p->collected.size() < quorum_size || p->honest.empty()) continue;
    ++rep.median_checked;
    if (!median_bound_holds(p->collected, p->honest, cfg.f)) {
      if (rep.median_violations++ == 0 && rep.first_violation.empty()) {
        rep.first_violation = "median bound at replica " + std::to_string(p->replica);
      }
    }
  }
  return rep;
}

HotStuffReport check_hotstuff_structure(const Trace& trace) {
  const auto& cfg = trace.config();
  HotStuffReport rep;
  std::map<std::tuple<ReplicaId, Epoch, InstanceIndex>, int64_t> covered;
  std::set<BlockId> dummies;
  std::set<std::pair<Epoch, InstanceIndex>> completed;
  Epoch last_epoch = 0;
  for (const auto& rec : trace.records) {
    if (const auto* h = std::get_if<trace::HsCommitRule>(&rec)) {
      ++rep.rules;
      const auto& ht = h->heights;
      const bool chain = ht[0] == h->committed_height && ht[1] == ht[0] + 1 &&
                         ht[2] == ht[1] + 1 && ht[3] == ht[2] + 1;
      if (!h->consecutive_parents || !h->certified || !chain) ++rep.bad_rules;
      auto& c = covered[{h->replica, h->epoch, h->index}];
      c = std::max(c, h->committed_height);
    } else if (const auto* p = std::get_if<trace::PartialCommit>(&rec)) {
      auto it = covered.find({p->replica, p->epoch, p->index});
      if (it == covered.end() || it->second < p->round) ++rep.uncovered_commits;
      if (p->rank == rank_range(p->epoch, cfg.epoch_length).second) {
        completed.emplace(p->epoch, p->index);
      }
    } else if (const auto* pr = std::get_if<trace::Propose>(&rec)) {
      if (pr->dummy) dummies.insert(BlockId{pr->epoch, pr->index, pr->round});
    } else if (const auto* g = std::get_if<trace::GlobalConfirm>(&rec)) {
      if (dummies.count(BlockId{g->epoch, g->index, g->round})) ++rep.dummies_confirmed;
    } else if (const auto* e = std::get_if<trace::EpochChange>(&rec)) {
      last_epoch = std::max(last_epoch, e->epoch);
    }
  }
  rep.dummies = dummies.size();
  rep.expected_instances = static_cast<uint64_t>(last_epoch) * static_cast<uint64_t>(cfg.m);
  for (const auto& [e, i] : completed) {
    if (e < last_epoch) ++rep.completed_instances;
  }
  return rep;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void write_metrics_csv(std::ostream& os, const std::string& scenario,
                       const MetricsReport& r) {
  const auto row = [&](const std::string& metric, const std::string& value) {
    os << scenario << ',' << metric << ',' << value << '\n';
  };
  row("throughput_mean_tps", fmt(r.throughput_mean));
  row("throughput_peak_tps", fmt(r.throughput_peak));
  row("latency_mean_ms", fmt(r.latency.mean_ms));
  row("latency_p50_ms", fmt(r.latency.p50_ms));
  row("latency_p99_ms", fmt(r.latency.p99_ms));
  row("tx_resolved", std::to_string(r.latency.resolved));
  row("tx_unresolved", std::to_string(r.latency.unresolved));
  row("causal_strength", r.cs.cs ? fmt(*r.cs.cs) : "");
  row("causal_inversions", std::to_string(r.cs.inversions));
  row("confirmed_blocks", std::to_string(r.cs.blocks));
  row("round_rate", fmt(r.round_rate));
  for (std::size_t t = 0; t < kMsgTypeCount; ++t) {
    const auto& m = r.messages.per_type[t];
    if (m.count == 0) continue;
    const std::string name = to_string(static_cast<MsgType>(t));
    row("messages_" + name, std::to_string(m.count));
    row("bytes_" + name, std::to_string(m.bytes));
    row("rank_units_" + name, std::to_string(m.rank_units));
    row("auth_ops_" + name, std::to_string(m.auth_ops));
  }
  row("messages_total", std::to_string(r.messages.total.count));
  row("bytes_total", std::to_string(r.messages.total.bytes));
  row("rank_units_total", std::to_string(r.messages.total.rank_units));
  row("auth_ops_total", std::to_string(r.messages.total.auth_ops));
}

void write_series_csv(std::ostream& os, SimTime window, const std::vector<double>& values) {
  os << "window_start_s,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    os << fmt(static_cast<double>(static_cast<SimTime>(i) * window) / kSecond) << ','
       << fmt(values[i]) << '\n';
  }
}

}  // namespace ladon
