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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ladon/hash.hpp"
#include "ladon/metrics.hpp"

namespace ladon {
namespace {

constexpr SimTime ms = kMillisecond;

uint64_t brute_inversions(const std::vector<SimTime>& gen, const std::vector<SimTime>& commit) {
  uint64_t n = 0;
  for (std::size_t i = 0; i < gen.size(); ++i) {
    for (std::size_t j = i + 1; j < gen.size(); ++j) n += gen[i] > commit[j];
  }
  return n;
}

TEST(Inversions, MatchesPairwiseCount) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto len = static_cast<std::size_t>(rng.uniform_int(0, 60));
    std::vector<SimTime> gen(len);
    std::vector<SimTime> commit(len);
    for (std::size_t i = 0; i < len; ++i) {
      gen[i] = rng.uniform_int(0, 40);
      commit[i] = gen[i] + rng.uniform_int(0, 20);
    }
    ASSERT_EQ(count_inversions(gen, commit), brute_inversions(gen, commit)) << trial;
  }
}

TEST(Inversions, SmallCases) {
  EXPECT_EQ(count_inversions({}, {}), 0u);
  EXPECT_EQ(count_inversions({0, 10}, {5, 15}), 0u);
  EXPECT_EQ(count_inversions({10, 0}, {15, 5}), 1u);
  // Equal times are not an inversion.
  EXPECT_EQ(count_inversions({5, 0}, {6, 5}), 0u);
  EXPECT_EQ(count_inversions({30, 20, 10}, {31, 21, 11}), 3u);
}

TEST(CausalStrengthValue, Examples) {
  EXPECT_FALSE(causal_strength_value(0, 0));
  EXPECT_DOUBLE_EQ(*causal_strength_value(0, 10), 1.0);
  EXPECT_NEAR(*causal_strength_value(10, 10), 0.367879, 1e-6);
  EXPECT_NEAR(*causal_strength_value(10, 1000), 0.990050, 1e-6);
}

TEST(AnalyticalRates, Examples) {
  const auto r = analytical_rates(16, 10);
  EXPECT_DOUBLE_EQ(r.ladon, 15.1);
  EXPECT_DOUBLE_EQ(r.baseline, 1.6);
  const auto none = analytical_rates(8, 1);
  EXPECT_DOUBLE_EQ(none.ladon, 8.0);
  EXPECT_DOUBLE_EQ(none.baseline, 8.0);
  const auto single = analytical_rates(1, 4);
  EXPECT_DOUBLE_EQ(single.ladon, 0.25);
  EXPECT_DOUBLE_EQ(single.baseline, 0.25);
}

TEST(ReplyQuorum, CountsDistinctReplicas) {
  EXPECT_FALSE(reply_quorum_time({}, 1));
  EXPECT_FALSE(reply_quorum_time({{0, 5}}, 1));
  EXPECT_EQ(reply_quorum_time({{0, 5}, {1, 9}}, 1), 9);
  EXPECT_EQ(reply_quorum_time({{2, 30}, {0, 5}, {1, 9}}, 1), 9);
  EXPECT_FALSE(reply_quorum_time({{0, 5}, {0, 6}, {0, 7}}, 1));
  EXPECT_EQ(reply_quorum_time({{0, 5}, {0, 6}, {1, 8}, {2, 7}}, 2), 8);
}

// Two blocks at n=4 with hand-picked times.
class HandTrace : public ::testing::Test {
 protected:
  void SetUp() override {
    trace::Config cfg;
    cfg.protocol = "LadonPBFT";
    cfg.n = 4;
    cfg.f = 1;
    cfg.m = 2;
    cfg.epoch_length = 64;
    cfg.base_interval = 100 * ms;
    cfg.duration = 3 * kSecond;
    cfg.load_cutoff = 2 * kSecond;
    cfg.honest = {0, 1, 2, 3};
    t.records.push_back(cfg);
    t.records.push_back(trace::ClientSubmit{0, 1, 3});
    propose(a, 0, 0);
    propose(b, 1, 50 * ms);
    t.records.push_back(trace::BlockContent{0, 0, 1, {1, 2}});
    t.records.push_back(trace::BlockContent{0, 1, 1, {3}});
    pc(0, b, 90);
    pc(1, b, 95);
    pc(0, a, 100);
    pc(1, a, 110);
    pc(2, a, 120);
    gc(0, 0, a, 150);
    gc(1, 0, a, 160);
    gc(0, 1, b, 170);
    gc(1, 1, b, 180);
    pc(2, b, 300);
    gc(2, 0, a, 400);
    t.records.push_back(trace::ClientSubmit{1500 * ms, 4, 2});
  }

  struct B {
    InstanceIndex index;
    Rank rank;
    Digest digest;
  };
  void propose(const B& x, ReplicaId leader, SimTime gen) {
    trace::Propose p;
    p.time = gen;
    p.replica = leader;
    p.index = x.index;
    p.round = 1;
    p.rank = x.rank;
    p.digest = x.digest;
    p.gen_time = gen;
    t.records.push_back(p);
  }
  void pc(ReplicaId r, const B& x, SimTime at) {
    t.records.push_back(trace::PartialCommit{at * ms, r, 0, x.index, 1, x.rank, x.digest, 0});
  }
  void gc(ReplicaId r, uint64_t sn, const B& x, SimTime at) {
    t.records.push_back(trace::GlobalConfirm{at * ms, r, sn, 0, x.index, 1, x.rank, {}});
  }

  B a{0, 0, 0xA};
  B b{1, 1, 0xB};
  Trace t;
};

TEST_F(HandTrace, BlockTimes) {
  const BlockTimes bt = block_times(t);
  const BlockId ia{0, 0, 1};
  const BlockId ib{0, 1, 1};
  EXPECT_EQ(bt.reply.at(ia), 160 * ms);
  EXPECT_EQ(bt.reply.at(ib), 180 * ms);
  EXPECT_EQ(bt.commit_f1.at(ia), 110 * ms);
  EXPECT_EQ(bt.commit_2f1.at(ia), 120 * ms);
  EXPECT_EQ(bt.commit_2f1.at(ib), 300 * ms);
  EXPECT_EQ(bt.proposal.at(ib)->gen_time, 50 * ms);
}

TEST_F(HandTrace, Metrics) {
  const MetricsReport r = compute_metrics(t, kSecond);
  ASSERT_EQ(r.throughput.size(), 3u);
  EXPECT_DOUBLE_EQ(r.throughput[0], 3.0);
  EXPECT_DOUBLE_EQ(r.throughput_peak, 3.0);
  EXPECT_DOUBLE_EQ(r.throughput_mean, 1.5);
  EXPECT_EQ(r.latency.resolved, 3u);
  EXPECT_EQ(r.latency.unresolved, 2u);
  EXPECT_NEAR(r.latency.mean_ms, (160.0 + 160.0 + 180.0) / 3, 1e-9);
  EXPECT_DOUBLE_EQ(r.latency.p50_ms, 160.0);
  EXPECT_EQ(r.cs.blocks, 2u);
  EXPECT_EQ(r.cs.inversions, 0u);
  EXPECT_DOUBLE_EQ(*r.cs.cs, 1.0);
  EXPECT_DOUBLE_EQ(r.round_rate, 0.1);
  EXPECT_EQ(r.queued_blocks, (std::vector<int64_t>{0, 0, 0}));
  EXPECT_EQ(queued_blocks_series(t, 2, kSecond), (std::vector<int64_t>{1, 1, 1}));
  EXPECT_EQ(queued_blocks_series(t, 2, 200 * ms).front(), 1);
}

TEST_F(HandTrace, LateGenerationIsAnInversion) {
  // b confirmed first but generated after a committed.
  for (auto& rec : t.records) {
    if (auto* g = std::get_if<trace::GlobalConfirm>(&rec); g && g->replica == 0) {
      g->sn = 1 - g->sn;
    }
    if (auto* p = std::get_if<trace::Propose>(&rec); p && p->index == 1) p->gen_time = 200 * ms;
  }
  const CausalStrength cs = causal_strength(t);
  EXPECT_EQ(cs.inversions, 1u);
  EXPECT_NEAR(*cs.cs, std::exp(-0.5), 1e-12);
}

TEST_F(HandTrace, FloorCheck) {
  FloorReport ok = check_byzantine_floor(t);
  EXPECT_EQ(ok.checked, 2u);
  EXPECT_EQ(ok.violations, 0u);
  // A later block below the rank a quorum already committed.
  B c{1, 0, 0xC};
  propose(c, 1, 350 * ms);
  t.records.back() = [&] {
    auto p = std::get<trace::Propose>(t.records.back());
    p.round = 2;
    return p;
  }();
  for (ReplicaId r = 0; r < 3; ++r) {
    t.records.push_back(trace::PartialCommit{500 * ms, r, 0, 1, 2, 0, 0xC, 0});
  }
  const FloorReport bad = check_byzantine_floor(t);
  EXPECT_EQ(bad.violations, 1u);
  EXPECT_NE(bad.first_violation.find("below floor 1"), std::string::npos);
}

TEST_F(HandTrace, CsvRows) {
  const MetricsReport r = compute_metrics(t, kSecond);
  std::ostringstream os;
  write_metrics_csv(os, "hand", r);
  const std::string csv = os.str();
  EXPECT_NE(csv.find("hand,throughput_mean_tps,1.500000"), std::string::npos);
  EXPECT_NE(csv.find("hand,causal_strength,1.000000"), std::string::npos);
  std::ostringstream series;
  write_series_csv(series, kSecond, r.throughput);
  EXPECT_EQ(series.str(), "window_start_s,value\n0.000000,3.000000\n1.000000,0.000000\n2.000000,0.000000\n");
}

}  // namespace
}  // namespace ladon
