// Copyright 2026 The scenkit Authors
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

#ifndef SCENKIT_HARNESS_HPP_
#define SCENKIT_HARNESS_HPP_

// Batch execution and aggregation. Scenario i is run by worker (i mod jobs)
// and its result is stored at slot i; the report is then folded in ordinal
// order by a single thread, so nothing but the timing section depends on
// the job count.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scenkit/coverage.hpp"
#include "scenkit/metrics.hpp"
#include "scenkit/simulator.hpp"

namespace scenkit {

using ScenarioRunner = std::function<SimulationLog(const ScenarioSpec&)>;

struct RunRecord {
  std::size_t ordinal = 0;
  std::string scenario_id;
  std::uint64_t seed = 0;
  ArchetypeId archetype = ArchetypeId::kS4;
  ScenarioParameters parameters;
  Validity validity;
  Termination termination = Termination::kDurationElapsed;
  std::optional<ScenarioMetrics> metrics;  // set iff validity is complete

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct Stat {
  std::size_t count = 0;
  std::optional<double> mean;
  std::optional<double> std;  // sample standard deviation, needs count >= 2

  friend bool operator==(const Stat&, const Stat&) = default;
};

struct GroupStats {
  std::string key;
  std::size_t runs = 0;  // valid runs
  std::size_t collisions = 0;
  double collision_rate = 0.0;
  Stat ttc_min;
  Stat d_min;

  friend bool operator==(const GroupStats&, const GroupStats&) = default;
};

struct Timing {
  std::size_t jobs = 1;
  double wall_seconds = 0.0;
  double mean_run_seconds = 0.0;
  double max_run_seconds = 0.0;

  friend bool operator==(const Timing&, const Timing&) = default;
};

struct CampaignReport {
  std::size_t scenario_count = 0;
  std::size_t valid_count = 0;
  std::size_t invalid_count = 0;
  std::map<std::string, std::size_t> invalid_reasons;
  std::size_t collision_count = 0;
  double collision_rate = 0.0;  // over valid runs
  Stat ttc_min;                 // finite values only
  Stat d_min;
  Stat pet;  // defined values only
  Stat max_decel;
  std::size_t threshold_violations_total = 0;
  double violation_fraction = 0.0;  // valid runs with at least one violation
  std::map<std::string, std::size_t> risk_histogram;
  std::vector<GroupStats> by_archetype;
  std::vector<GroupStats> by_ego_speed_bin;
  std::vector<GroupStats> by_approach_angle_bin;
  std::optional<CoverageReport> coverage;
  std::vector<RunRecord> runs;
  Timing timing;  // excluded from determinism comparisons

  friend bool operator==(const CampaignReport&, const CampaignReport&) = default;
};

struct CampaignOptions {
  std::size_t jobs = 1;
  bool retain_logs = true;
  // Called once per finished run, possibly from several threads at once.
  std::function<void(std::size_t ordinal, const SimulationLog&)> on_log;
  // Defaults to run_scenario.
  ScenarioRunner runner;
};

struct CampaignResult {
  std::vector<SimulationLog> logs;  // by ordinal; empty unless retain_logs
  CampaignReport report;
};

// A failure inside a run (exception from the runner, the metrics or the
// sink) marks that run invalid and never touches the others.
CampaignResult run_campaign(std::span<const ScenarioSpec> specs, const CampaignOptions& options);
// Same contract, single thread, no OpenMP.
CampaignResult run_campaign_serial(std::span<const ScenarioSpec> specs,
                                   const CampaignOptions& options);

RunRecord evaluate_log(std::size_t ordinal, const SimulationLog& log);

// Deterministic fold over records sorted by ordinal. Coverage is computed
// over the default domain from every record's parameters when they all lie
// inside it.
CampaignReport aggregate(std::vector<RunRecord> runs);

// Number of jobs from SCENKIT_JOBS, else `fallback`.
std::size_t default_jobs(std::size_t fallback = 1);

}  // namespace scenkit

#endif  // SCENKIT_HARNESS_HPP_
