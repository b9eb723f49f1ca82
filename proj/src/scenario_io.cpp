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

#include "ladon/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace ladon {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

// Reads fields of one JSON object and rejects the keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "scenario" : path_, "expected an object");
  }

  ~ObjectReader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) fail(at(key), "unknown field");
    }
  }

  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* get(const std::string& key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    const json* v = get(key);
    if (!v) return;
    if (!v->is_number_integer()) fail(at(key), "expected an integer");
    const auto raw = v->get<int64_t>();
    if (raw < static_cast<int64_t>(std::numeric_limits<Int>::min()) ||
        (raw > 0 && static_cast<uint64_t>(raw) >
                        static_cast<uint64_t>(std::numeric_limits<Int>::max()))) {
      fail(at(key), "out of range");
    }
    out = static_cast<Int>(raw);
  }

  void number(const std::string& key, double& out) {
    const json* v = get(key);
    if (!v) return;
    if (!v->is_number()) fail(at(key), "expected a number");
    out = v->get<double>();
    if (!std::isfinite(out)) fail(at(key), "expected a finite number");
  }

  void time(const std::string& key, SimTime unit, SimTime& out) {
    double v = static_cast<double>(out) / static_cast<double>(unit);
    number(key, v);
    out = static_cast<SimTime>(std::llround(v * static_cast<double>(unit)));
  }

  void boolean(const std::string& key, bool& out) {
    const json* v = get(key);
    if (!v) return;
    if (!v->is_boolean()) fail(at(key), "expected true or false");
    out = v->get<bool>();
  }

  void string(const std::string& key, std::string& out) {
    const json* v = get(key);
    if (!v) return;
    if (!v->is_string()) fail(at(key), "expected a string");
    out = v->get<std::string>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void read_network(const json& j, NetworkModel& net) {
  ObjectReader r(j, "network");
  r.integer("regions", net.regions);
  r.time("intra_delay_ms", kMillisecond, net.intra_delay);
  r.time("inter_delay_ms", kMillisecond, net.inter_delay);
  r.time("jitter_ms", kMillisecond, net.jitter);
  r.time("delta_ms", kMillisecond, net.delta);
  r.time("gst_ms", kMillisecond, net.gst);
  r.time("pre_gst_cap_ms", kMillisecond, net.pre_gst_cap);
}

void read_clients(const json& j, ClientLoad& c) {
  ObjectReader r(j, "clients");
  r.number("tx_per_second", c.tx_per_second);
  r.integer("payload_size", c.payload_size);
  r.time("submit_interval_ms", kMillisecond, c.submit_interval);
}

FaultSpec read_fault(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  FaultSpec f;
  if (!j.contains("replica")) fail(path + ".replica", "required");
  if (!j.contains("kind")) fail(path + ".kind", "required");
  r.integer("replica", f.replica);
  std::string kind;
  r.string("kind", kind);
  auto parsed = parse_fault_kind(kind);
  if (!parsed) fail(path + ".kind", "unknown fault kind \"" + kind + "\"");
  f.kind = *parsed;
  r.number("k", f.k);
  r.time("crash_time_ms", kMillisecond, f.crash_time);
  r.integer("extra_collect", f.extra_collect);
  return f;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  Scenario s;
  {
    ObjectReader r(j, "");
    r.string("name", s.name);
    std::string protocol = to_string(s.protocol);
    r.string("protocol", protocol);
    auto p = parse_protocol(protocol);
    if (!p) fail("protocol", "unknown protocol \"" + protocol + "\"");
    s.protocol = *p;
    r.integer("n", s.n);
    s.f = (s.n - 1) / 3;
    r.integer("f", s.f);
    r.integer("m", s.m);
    r.integer("epoch_length", s.epoch_length);
    r.integer("batch_size", s.batch_size);
    r.integer("num_buckets", s.num_buckets);
    r.time("proposal_interval_ms", kMillisecond, s.base_proposal_interval);
    r.time("view_change_timeout_ms", kMillisecond, s.view_change_timeout);
    r.integer("rank_key_count", s.rank_key_count);
    r.time("duration_s", kSecond, s.duration);
    r.time("load_cutoff_s", kSecond, s.load_cutoff);
    r.time("warmup_s", kSecond, s.warmup);
    r.time("metrics_window_s", kSecond, s.metrics_window);
    r.integer("seed", s.seed);
    r.boolean("trace_messages", s.trace_messages);
    r.boolean("allow_excess_faults", s.allow_excess_faults);
    if (const json* net = r.get("network")) read_network(*net, s.network);
    if (const json* c = r.get("clients")) read_clients(*c, s.clients);
    if (const json* faults = r.get("faults")) {
      if (!faults->is_array()) fail("faults", "expected an array");
      for (std::size_t i = 0; i < faults->size(); ++i) {
        s.faults.push_back(read_fault((*faults)[i], "faults[" + std::to_string(i) + "]"));
      }
    }
  }
  validate(s);
  return s;
}

Scenario parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  return scenario_from_json(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario parse_scenario(const std::string& path) {
  try {
    return parse_scenario_text(read_file(path));
  } catch (const ScenarioError& e) {
    const std::string what = e.what();
    if (what.rfind(path + ":", 0) == 0) throw;
    throw ScenarioError(path + ": " + what);
  }
}

nlohmann::ordered_json to_json(const Scenario& s) {
  const auto ms = [](SimTime t) { return static_cast<double>(t) / kMillisecond; };
  const auto sec = [](SimTime t) { return static_cast<double>(t) / kSecond; };
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["protocol"] = to_string(s.protocol);
  j["n"] = s.n;
  j["f"] = s.f;
  j["m"] = s.m;
  j["epoch_length"] = s.epoch_length;
  j["batch_size"] = s.batch_size;
  j["num_buckets"] = s.num_buckets;
  j["proposal_interval_ms"] = ms(s.base_proposal_interval);
  j["view_change_timeout_ms"] = ms(s.view_change_timeout);
  j["rank_key_count"] = s.rank_key_count;
  j["duration_s"] = sec(s.duration);
  j["load_cutoff_s"] = sec(s.load_cutoff);
  j["warmup_s"] = sec(s.warmup);
  j["metrics_window_s"] = sec(s.metrics_window);
  j["seed"] = s.seed;
  j["trace_messages"] = s.trace_messages;
  j["allow_excess_faults"] = s.allow_excess_faults;
  j["network"] = {{"regions", s.network.regions},
                  {"intra_delay_ms", ms(s.network.intra_delay)},
                  {"inter_delay_ms", ms(s.network.inter_delay)},
                  {"jitter_ms", ms(s.network.jitter)},
                  {"delta_ms", ms(s.network.delta)},
                  {"gst_ms", ms(s.network.gst)},
                  {"pre_gst_cap_ms", ms(s.network.pre_gst_cap)}};
  j["clients"] = {{"tx_per_second", s.clients.tx_per_second},
                  {"payload_size", s.clients.payload_size},
                  {"submit_interval_ms", ms(s.clients.submit_interval)}};
  j["faults"] = nlohmann::ordered_json::array();
  for (const auto& f : s.faults) {
    j["faults"].push_back({{"replica", f.replica},
                           {"kind", to_string(f.kind)},
                           {"k", f.k},
                           {"crash_time_ms", ms(f.crash_time)},
                           {"extra_collect", f.extra_collect}});
  }
  return j;
}

}  // namespace ladon
