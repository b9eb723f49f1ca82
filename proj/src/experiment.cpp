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

#include "ladon/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include "ladon/scenario_io.hpp"
#include "ladon/simulator.hpp"

namespace ladon {

using nlohmann::json;

SweepPoint sweep_point(const Scenario& s) {
  SweepPoint p;
  p.protocol = s.protocol;
  p.n = s.n;
  for (const auto& f : s.faults) {
    if (f.kind != FaultKind::HonestStraggler) continue;
    ++p.stragglers;
    p.k = std::max(p.stragglers == 1 ? f.k : p.k, f.k);
  }
  return p;
}

bool is_sweep(const json& j) { return j.is_object() && j.contains("sweep"); }

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

template <typename T, typename Fn>
std::vector<T> dimension(const json& sweep, const char* key, Fn convert) {
  std::vector<T> out;
  auto it = sweep.find(key);
  if (it == sweep.end()) return out;
  const std::string path = std::string("sweep.") + key;
  if (!it->is_array()) fail(path, "expected an array");
  if (it->empty()) fail(path, "empty dimension");
  for (std::size_t i = 0; i < it->size(); ++i) {
    out.push_back(convert((*it)[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

std::string point_label(const SweepPoint& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s-n%d-s%d-k%g", to_string(p.protocol), p.n,
                p.stragglers, p.k);
  return buf;
}

}  // namespace

SweepSpec sweep_from_json(const json& j) {
  if (!j.is_object()) fail("sweep file", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "base" && key != "sweep") fail(key, "unknown field");
  }
  SweepSpec spec;
  spec.base = scenario_from_json(j.value("base", json::object()));
  const json& sweep = j.at("sweep");
  if (!sweep.is_object()) fail("sweep", "expected an object");
  for (const auto& [key, value] : sweep.items()) {
    if (key != "protocol" && key != "n" && key != "stragglers" && key != "k") {
      fail("sweep." + key, "not a sweep dimension");
    }
  }
  spec.protocols = dimension<Protocol>(sweep, "protocol", [](const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    auto p = parse_protocol(v.get<std::string>());
    if (!p) fail(path, "unknown protocol");
    return *p;
  });
  spec.ns = dimension<int>(sweep, "n", as_int);
  spec.stragglers = dimension<int>(sweep, "stragglers", as_int);
  spec.ks = dimension<double>(sweep, "k", [](const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  });
  if (spec.protocols.empty() && spec.ns.empty() && spec.stragglers.empty() &&
      spec.ks.empty()) {
    fail("sweep", "empty sweep");
  }
  return spec;
}

Scenario apply_point(const Scenario& base, const SweepPoint& point) {
  Scenario s = base;
  s.protocol = point.protocol;
  s.n = point.n;
  s.f = (point.n - 1) / 3;
  const SweepPoint from = sweep_point(base);
  if (point.stragglers == from.stragglers && point.n == base.n) {
    for (auto& f : s.faults) {
      if (f.kind == FaultKind::HonestStraggler) f.k = point.k;
    }
  } else {
    std::erase_if(s.faults,
                  [](const FaultSpec& f) { return f.kind == FaultKind::HonestStraggler; });
    for (int j = 0; j < point.stragglers; ++j) {
      FaultSpec f;
      f.replica = point.n - 1 - j;
      f.kind = FaultKind::HonestStraggler;
      f.k = point.k;
      s.faults.push_back(f);
    }
  }
  s.name = base.name + "/" + point_label(point);
  validate(s);
  return s;
}

std::vector<SweepMember> expand_sweep(const SweepSpec& spec) {
  const SweepPoint b = sweep_point(spec.base);
  const auto or_base = [](const auto& values, auto fallback) {
    return values.empty() ? std::vector<decltype(fallback)>{fallback} : values;
  };
  std::vector<SweepMember> out;
  for (Protocol protocol : or_base(spec.protocols, b.protocol)) {
    for (int n : or_base(spec.ns, b.n)) {
      for (int stragglers : or_base(spec.stragglers, b.stragglers)) {
        for (double k : or_base(spec.ks, b.k)) {
          const SweepPoint p{protocol, n, stragglers, k};
          out.push_back({p, apply_point(spec.base, p)});
        }
      }
    }
  }
  return out;
}

std::vector<SweepMember> members_from_scenarios(const std::vector<Scenario>& scenarios) {
  if (scenarios.empty()) fail("compare", "no scenarios given");
  const auto normalized = [](const Scenario& s) {
    Scenario c = s;
    c.name.clear();
    c.protocol = Protocol::LadonPBFT;
    c.n = 0;
    c.f = 0;
    std::erase_if(c.faults,
                  [](const FaultSpec& f) { return f.kind == FaultKind::HonestStraggler; });
    return to_json(c).dump();
  };
  const std::string ref = normalized(scenarios.front());
  std::vector<SweepMember> out;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (normalized(scenarios[i]) != ref) {
      fail(scenarios[i].name,
           "differs from " + scenarios.front().name + " outside protocol, n, stragglers, k");
    }
    out.push_back({sweep_point(scenarios[i]), scenarios[i]});
  }
  return out;
}

std::vector<ComparisonRow> run_comparison(const std::vector<SweepMember>& members,
                                          unsigned threads) {
  std::vector<ComparisonRow> rows(members.size());
  std::vector<std::exception_ptr> errors(members.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i; (i = next++) < members.size();) {
      try {
        const Scenario& s = members[i].scenario;
        RunOutcome out = simulate(s);
        ComparisonRow& row = rows[i];
        row.point = members[i].point;
        row.name = s.name;
        row.metrics = compute_metrics(out.trace, s.metrics_window);
        row.invariant_checks = out.invariant_checks;
        if (out.violation) row.violation = out.violation->invariant;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(members.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  const auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  os << "scenario,protocol,n,stragglers,k,throughput_mean_tps,latency_mean_ms,"
        "latency_p50_ms,latency_p99_ms,causal_strength,confirmed_blocks,round_rate,"
        "messages_total,rank_units_total,violation\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    os << r.name << ',' << to_string(r.point.protocol) << ',' << r.point.n << ','
       << r.point.stragglers << ',' << fmt(r.point.k) << ',' << fmt(m.throughput_mean) << ','
       << fmt(m.latency.mean_ms) << ',' << fmt(m.latency.p50_ms) << ','
       << fmt(m.latency.p99_ms) << ',' << (m.cs.cs ? fmt(*m.cs.cs) : "") << ','
       << m.cs.blocks << ',' << fmt(m.round_rate) << ',' << m.messages.total.count << ','
       << m.messages.total.rank_units << ',' << r.violation.value_or("") << '\n';
  }
}

}  // namespace ladon
