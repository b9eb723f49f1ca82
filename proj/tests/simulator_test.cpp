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

#include <sstream>

#include "ladon/metrics.hpp"
#include "ladon/simulator.hpp"

namespace ladon {

void PrintTo(Protocol p, std::ostream* os) { *os << to_string(p); }

namespace {

Scenario small(Protocol p, int n = 4) {
  Scenario s;
  s.name = "small";
  s.protocol = p;
  s.n = n;
  s.f = (n - 1) / 3;
  s.epoch_length = 16;
  s.base_proposal_interval = 50 * kMillisecond;
  s.view_change_timeout = 500 * kMillisecond;
  s.duration = 3 * kSecond;
  s.load_cutoff = 1 * kSecond;
  s.clients.tx_per_second = 1000;
  return s;
}

std::string dump(const Trace& t) {
  std::ostringstream os;
  write_trace(os, t);
  return os.str();
}

FaultSpec fault(ReplicaId r, FaultKind kind, double k = 1.0, SimTime crash = 0) {
  FaultSpec f;
  f.replica = r;
  f.kind = kind;
  f.k = k;
  f.crash_time = crash;
  return f;
}

TEST(SampleDelay, BoundsBeforeAndAfterGst) {
  NetworkModel net;
  net.regions = 2;
  net.intra_delay = 2 * kMillisecond;
  net.inter_delay = 40 * kMillisecond;
  net.jitter = 5 * kMillisecond;
  net.delta = 42 * kMillisecond;
  net.gst = kSecond;
  net.pre_gst_cap = 300 * kMillisecond;
  Rng rng(7);
  EXPECT_EQ(sample_delay(net, 3, 3, 0, rng), 0);
  for (int i = 0; i < 2000; ++i) {
    const SimTime same = sample_delay(net, 0, 2, 2 * kSecond, rng);
    EXPECT_GE(same, 2 * kMillisecond);
    EXPECT_LE(same, 7 * kMillisecond);
    const SimTime cross = sample_delay(net, 0, 1, 2 * kSecond, rng);
    EXPECT_GE(cross, 40 * kMillisecond);
    EXPECT_LE(cross, 42 * kMillisecond);
    const SimTime early = sample_delay(net, 0, 1, 0, rng);
    EXPECT_GE(early, 40 * kMillisecond);
    EXPECT_LE(early, 300 * kMillisecond);
  }
  Rng a(11);
  Rng b(11);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_delay(net, 0, 1, 0, a), sample_delay(net, 0, 1, 0, b));
  }
}

TEST(ScenarioValidate, RejectsBadShapes) {
  const auto error_of = [](const Scenario& s) -> std::string {
    try {
      validate(s);
    } catch (const ScenarioError& e) {
      return e.what();
    }
    return "";
  };
  Scenario ok = small(Protocol::LadonPBFT);
  EXPECT_EQ(error_of(ok), "");
  Scenario s = ok;
  s.n = 5;
  EXPECT_NE(error_of(s).find("n:"), std::string::npos);
  s = ok;
  s.faults = {fault(1, FaultKind::ByzantineRankMin), fault(2, FaultKind::ByzantineRankMin)};
  EXPECT_NE(error_of(s).find("faults"), std::string::npos);
  s.allow_excess_faults = true;
  EXPECT_EQ(error_of(s), "");
  s = ok;
  s.faults = {fault(9, FaultKind::Crash)};
  EXPECT_NE(error_of(s), "");
  s = ok;
  s.epoch_length = 0;
  EXPECT_NE(error_of(s), "");
  s = ok;
  s.faults = {fault(1, FaultKind::HonestStraggler, 0.5)};
  EXPECT_NE(error_of(s), "");
}

class ProtocolRun : public ::testing::TestWithParam<Protocol> {};

TEST_P(ProtocolRun, HappyPathConfirmsEveryTransaction) {
  const Scenario s = small(GetParam());
  const RunOutcome out = simulate(s);
  ASSERT_FALSE(out.violation) << out.violation->invariant << ": " << out.violation->detail;
  EXPECT_GT(out.invariant_checks, 0u);
  ASSERT_EQ(out.logs.size(), 4u);
  EXPECT_FALSE(out.logs[0].empty());
  for (const auto& log : out.logs) EXPECT_EQ(log, out.logs[0]);
  const MetricsReport r = compute_metrics(out.trace, s.metrics_window);
  EXPECT_GT(r.latency.resolved, 900u);
  EXPECT_EQ(r.latency.unresolved, 0u);
}

TEST_P(ProtocolRun, SameSeedSameTrace) {
  Scenario s = small(GetParam());
  s.network.gst = 500 * kMillisecond;
  s.faults = {fault(3, FaultKind::HonestStraggler, 3.0)};
  const std::string a = dump(simulate(s).trace);
  const std::string b = dump(simulate(s).trace);
  EXPECT_EQ(a, b);
  s.seed = 2;
  EXPECT_NE(dump(simulate(s).trace), a);
}

TEST_P(ProtocolRun, LeaderCrashRecovers) {
  Scenario s = small(GetParam());
  s.duration = 6 * kSecond;
  s.load_cutoff = 2 * kSecond;
  s.faults = {fault(1, FaultKind::Crash, 1.0, 500 * kMillisecond)};
  const RunOutcome out = simulate(s);
  ASSERT_FALSE(out.violation) << out.violation->invariant;
  EXPECT_TRUE(out.logs[1].size() <= out.logs[0].size());
  EXPECT_EQ(out.logs[0], out.logs[2]);
  EXPECT_EQ(out.logs[0], out.logs[3]);
  EXPECT_EQ(out.trace.all<trace::Crash>().size(), 1u);
  EXPECT_FALSE(out.trace.all<trace::NewView>().empty());
  const MetricsReport r = compute_metrics(out.trace, s.metrics_window);
  EXPECT_EQ(r.latency.unresolved, 0u);
}

TEST_P(ProtocolRun, ByzantineLeaderStaysSafe) {
  if (GetParam() == Protocol::BaselinePredetermined) GTEST_SKIP();
  Scenario s = small(GetParam(), 7);
  s.faults = {fault(2, FaultKind::ByzantineRankMin), fault(5, FaultKind::ByzantineRankMin)};
  const RunOutcome out = simulate(s);
  ASSERT_FALSE(out.violation) << out.violation->invariant;
  const FloorReport fl = check_byzantine_floor(out.trace);
  EXPECT_GT(fl.checked, 0u);
  EXPECT_EQ(fl.violations, 0u) << fl.first_violation;
  EXPECT_EQ(fl.median_violations, 0u);
}

INSTANTIATE_TEST_SUITE_P(All, ProtocolRun,
                         ::testing::Values(Protocol::LadonPBFT, Protocol::LadonOpt,
                                           Protocol::LadonHotStuff,
                                           Protocol::BaselinePredetermined),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Simulator, ExcessByzantineQuorumIsCaught) {
  Scenario s = small(Protocol::LadonPBFT);
  s.allow_excess_faults = true;
  s.faults = {fault(1, FaultKind::ByzantineRankMin), fault(2, FaultKind::ByzantineRankMin),
              fault(3, FaultKind::ByzantineRankMin)};
  const RunOutcome out = simulate(s);
  ASSERT_TRUE(out.violation);
  EXPECT_EQ(out.violation->invariant, "Lemma3");
  EXPECT_THROW(run_scenario(s), InvariantViolation);
}

}  // namespace
}  // namespace ladon
