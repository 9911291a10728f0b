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

#ifndef SCENKIT_METRICS_HPP_
#define SCENKIT_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scenkit/simulator.hpp"

namespace scenkit {

inline constexpr double kViolationThreshold = 1.2;  // s
inline constexpr double kConflictRadius = 2.0;      // m

enum class RiskLevel { kLow, kMedium, kHigh };
std::string_view risk_name(RiskLevel r);  // "Low", "Medium", "High"
std::optional<RiskLevel> risk_from_name(std::string_view name);

// Thresholds of the risk rule set. They are the loosest values that still
// separate the reference tuples in tests/metrics_test.cpp.
struct RiskThresholds {
  double severe_impact_dv = 2.0;  // m/s
  double critical_ttc = 0.5;      // s
  std::size_t many_violations = 3;
  double close_pet = 1.0;         // s
  double close_d_min = 15.0;      // m
};

struct RiskInputs {
  bool collision = false;
  double impact_dv = 0.0;
  double ttc_min = 0.0;
  double d_min = 0.0;
  std::optional<double> pet;
  std::size_t threshold_violations = 0;
};

RiskLevel classify_risk(const RiskInputs& m, const RiskThresholds& th = {});

struct ScenarioMetrics {
  double ttc_min = 0.0;  // s, infinity if never on a collision course
  double d_min = 0.0;    // m
  std::optional<double> pet;
  std::optional<double> brake_onset;  // s after the first trigger
  double max_decel = 0.0;             // m/s^2
  std::size_t threshold_violations = 0;
  bool collision = false;
  double impact_dv = 0.0;  // m/s
  RiskLevel risk = RiskLevel::kLow;

  RiskInputs risk_inputs() const;

  friend bool operator==(const ScenarioMetrics&, const ScenarioMetrics&) = default;
};

// Metrics need a complete log; anything else is refused with its reason.
class LogRefused : public std::runtime_error {
 public:
  explicit LogRefused(const Validity& validity);
  const Validity& validity() const { return validity_; }

 private:
  Validity validity_;
};

// Smallest t > 0 with |dp + dv t| = radii_sum under constant velocities;
// 0 while the discs overlap, infinity when they never touch.
double compute_ttc(const AgentState& ego, const AgentState& actor, double radii_sum);

// Post-encroachment time at the crossing of the ego's initial path with the
// obstacle's path (first vulnerable hazard, else first hazard). Undefined
// for parallel paths, when the zone is never left by the ego or never
// reached by the obstacle, or when the obstacle gets there first.
std::optional<double> compute_pet(const SimulationLog& log,
                                  double conflict_radius = kConflictRadius);

// Number of maximal runs of consecutive values below `threshold`.
std::size_t count_threshold_violations(std::span<const double> ttc,
                                       double threshold = kViolationThreshold);
std::size_t count_threshold_violations(const SimulationLog& log,
                                       double threshold = kViolationThreshold);

ScenarioMetrics compute_run_metrics(const SimulationLog& log);

// Campaign metrics CSV: one header line, then one row per run.
std::string metrics_csv_header();
std::string metrics_csv_row(const SimulationLog& log, const ScenarioMetrics& m);

}  // namespace scenkit

#endif  // SCENKIT_METRICS_HPP_
