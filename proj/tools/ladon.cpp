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

// Command-line driver: run, compare, golden.

#include <CLI11.hpp>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ladon/experiment.hpp"
#include "ladon/golden.hpp"
#include "ladon/metrics.hpp"
#include "ladon/scenario_io.hpp"
#include "ladon/simulator.hpp"

namespace fs = std::filesystem;
using namespace ladon;

namespace {

constexpr int kExitError = 1;
constexpr int kExitViolation = 2;

struct CommonFlags {
  std::optional<uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> duration_s;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Override the scenario seed");
  cmd->add_option("--out", flags.out, "Output directory (default $LADON_OUT or ./out)");
  cmd->add_option("--duration", flags.duration_s, "Override the run length in seconds")
      ->check(CLI::PositiveNumber);
}

fs::path out_dir(const CommonFlags& flags) {
  fs::path dir = "out";
  if (const char* env = std::getenv("LADON_OUT"); env && *env) dir = env;
  if (flags.out) dir = *flags.out;
  fs::create_directories(dir);
  return dir;
}

void apply_overrides(Scenario& s, const CommonFlags& flags) {
  if (flags.seed) s.seed = *flags.seed;
  if (flags.duration_s) {
    s.duration = static_cast<SimTime>(*flags.duration_s * kSecond);
    if (s.load_cutoff > s.duration) s.load_cutoff = 0;
    if (s.warmup >= s.duration) s.warmup = 0;
    for (auto& f : s.faults) f.crash_time = std::min(f.crash_time, s.duration);
  }
  validate(s);
}

std::string file_stem(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                      c == '.';
    out += keep ? c : '_';
  }
  return out.empty() ? "scenario" : out;
}

void write(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw std::runtime_error("cannot write " + path.string());
}

int cmd_run(const std::string& path, const CommonFlags& flags) {
  Scenario s = parse_scenario(path);
  apply_overrides(s, flags);
  const fs::path dir = out_dir(flags);
  const std::string stem = file_stem(s.name);

  RunOutcome out = simulate(s);
  const MetricsReport report = compute_metrics(out.trace, s.metrics_window);
  const FloorReport floor = check_byzantine_floor(out.trace);

  std::ostringstream trace_text;
  write_trace(trace_text, out.trace);
  write(dir / (stem + ".trace"), trace_text.str());

  std::ostringstream csv;
  csv << "scenario,metric,value\n";
  write_metrics_csv(csv, s.name, report);
  write(dir / (stem + ".metrics.csv"), csv.str());

  std::ostringstream thr;
  write_series_csv(thr, report.window, report.throughput);
  write(dir / (stem + ".throughput.csv"), thr.str());

  std::ostringstream queued;
  std::vector<double> q(report.queued_blocks.begin(), report.queued_blocks.end());
  write_series_csv(queued, report.window, q);
  write(dir / (stem + ".queued.csv"), queued.str());

  bool failed = out.violation.has_value() || floor.violations > 0 ||
                floor.median_violations > 0;
  std::ostringstream sum;
  sum << "scenario " << s.name << "\n"
      << "protocol " << to_string(s.protocol) << "\n"
      << "seed " << s.seed << "\n"
      << "events " << out.trace.events_processed << "\n"
      << "invariant_checks " << out.invariant_checks << "\n";
  if (out.violation) {
    sum << "violation " << out.violation->invariant << " at event "
        << out.violation->event_index << ": " << out.violation->detail << "\n";
  }
  sum << "floor_checked " << floor.checked << " violations " << floor.violations << "\n"
      << "median_checked " << floor.median_checked << " violations "
      << floor.median_violations << "\n";
  if (!floor.first_violation.empty()) sum << "floor_first " << floor.first_violation << "\n";
  if (s.protocol == Protocol::LadonHotStuff) {
    const HotStuffReport hs = check_hotstuff_structure(out.trace);
    sum << "hotstuff_rules " << hs.rules << " bad " << hs.bad_rules << " uncovered "
        << hs.uncovered_commits << " dummies_confirmed " << hs.dummies_confirmed << "\n";
    failed = failed || hs.bad_rules > 0 || hs.uncovered_commits > 0 || hs.dummies_confirmed > 0;
  }
  sum << "result " << (failed ? "FAIL" : "ok") << "\n";
  write(dir / (stem + ".summary.txt"), sum.str());
  std::cout << sum.str();
  return failed ? kExitViolation : 0;
}

int cmd_compare(const std::vector<std::string>& paths, const CommonFlags& flags,
                unsigned threads) {
  std::vector<SweepMember> members;
  if (paths.size() == 1) {
    const nlohmann::json j = [&] {
      try {
        return nlohmann::json::parse(read_file(paths.front()));
      } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError(paths.front() + ": " + e.what());
      }
    }();
    if (is_sweep(j)) {
      members = expand_sweep(sweep_from_json(j));
    } else {
      members = members_from_scenarios({scenario_from_json(j)});
    }
  } else {
    std::vector<Scenario> scenarios;
    for (const auto& p : paths) scenarios.push_back(parse_scenario(p));
    members = members_from_scenarios(scenarios);
  }
  for (auto& m : members) apply_overrides(m.scenario, flags);
  const auto rows = run_comparison(members, threads);
  std::ostringstream csv;
  write_comparison_csv(csv, rows);
  write(out_dir(flags) / "comparison.csv", csv.str());
  std::cout << csv.str();
  for (const auto& r : rows) {
    if (r.violation) return kExitViolation;
  }
  return 0;
}

int cmd_golden(const CommonFlags& flags) {
  std::ostringstream text;
  bool ok = true;
  for (const auto& c : run_golden_checks()) {
    text << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    ok = ok && c.passed;
  }
  if (flags.out || std::getenv("LADON_OUT")) write(out_dir(flags) / "golden.txt", text.str());
  std::cout << text.str();
  return ok ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-leader BFT ordering simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags, cmp_flags, golden_flags;
  std::string run_path;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", run_path, "Scenario file")->required()->check(CLI::ExistingFile);
  add_common(run, run_flags);

  std::vector<std::string> cmp_paths;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto* cmp = app.add_subcommand("compare", "Run a sweep or several scenarios side by side");
  cmp->add_option("scenarios", cmp_paths, "Sweep file, or scenario files")
      ->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--threads", threads, "Parallel runs")->check(CLI::PositiveNumber);
  add_common(cmp, cmp_flags);

  auto* golden = app.add_subcommand("golden", "Check the scripted ordering and leader examples");
  add_common(golden, golden_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }
  try {
    if (*run) return cmd_run(run_path, run_flags);
    if (*cmp) return cmd_compare(cmp_paths, cmp_flags, threads);
    if (*golden) return cmd_golden(golden_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
