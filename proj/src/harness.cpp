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

#include "scenkit/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>

#include "scenkit/numfmt.hpp"

namespace scenkit {

namespace {

using Clock = std::chrono::steady_clock;

SimulationLog failed_log(const ScenarioSpec& spec, std::string reason) {
  SimulationLog log;
  log.spec_id = spec.id;
  log.seed = spec.seed;
  log.archetype = spec.archetype;
  log.parameters = spec.parameters;
  log.duration = spec.duration;
  log.validity = Validity::invalid(std::move(reason));
  return log;
}

// Runs spec i and evaluates it; never throws.
RunRecord run_one(std::size_t i, const ScenarioSpec& spec, const CampaignOptions& options,
                  SimulationLog* keep, double& seconds) {
  const auto t0 = Clock::now();
  SimulationLog log;
  try {
    log = options.runner ? options.runner(spec) : run_scenario(spec);
  } catch (const SpecError&) {
    log = failed_log(spec, "invalid_spec");
  } catch (...) {
    log = failed_log(spec, "worker_exception");
  }
  RunRecord rec = evaluate_log(i, log);
  if (options.on_log) {
    try {
      options.on_log(i, log);
    } catch (...) {
      rec.validity = Validity::invalid("sink_failed");
      rec.metrics.reset();
    }
  }
  if (keep) *keep = std::move(log);
  seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return rec;
}

Timing timing_of(std::size_t jobs, Clock::time_point start, const std::vector<double>& per_run) {
  Timing t;
  t.jobs = jobs;
  t.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (!per_run.empty()) {
    double sum = 0.0;
    for (double s : per_run) {
      sum += s;
      t.max_run_seconds = std::max(t.max_run_seconds, s);
    }
    t.mean_run_seconds = sum / static_cast<double>(per_run.size());
  }
  return t;
}

Stat stat_of(const std::vector<double>& xs) {
  Stat s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  s.mean = mean;
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

struct GroupAccumulator {
  std::size_t runs = 0;
  std::size_t collisions = 0;
  std::vector<double> ttc;
  std::vector<double> dmin;

  void add(const ScenarioMetrics& m) {
    ++runs;
    if (m.collision) ++collisions;
    if (std::isfinite(m.ttc_min)) ttc.push_back(m.ttc_min);
    if (std::isfinite(m.d_min)) dmin.push_back(m.d_min);
  }
  GroupStats finish(std::string key) const {
    GroupStats g;
    g.key = std::move(key);
    g.runs = runs;
    g.collisions = collisions;
    g.collision_rate = runs ? static_cast<double>(collisions) / static_cast<double>(runs) : 0.0;
    g.ttc_min = stat_of(ttc);
    g.d_min = stat_of(dmin);
    return g;
  }
};

std::vector<GroupStats> binned_groups(const std::vector<RunRecord>& runs,
                                      const ParameterAxis& axis) {
  std::vector<GroupAccumulator> acc(axis.bin_count());
  for (const auto& r : runs) {
    if (!r.metrics) continue;
    const double v = r.parameters.get(axis.id);
    if (!axis.contains(v)) continue;
    acc[bin_index(axis, v)].add(*r.metrics);
  }
  std::vector<GroupStats> out;
  for (std::size_t k = 0; k < acc.size(); ++k) {
    out.push_back(acc[k].finish(format_double(axis.bin_centers[k])));
  }
  return out;
}

}  // namespace

RunRecord evaluate_log(std::size_t ordinal, const SimulationLog& log) {
  RunRecord rec;
  rec.ordinal = ordinal;
  rec.scenario_id = log.spec_id;
  rec.seed = log.seed;
  rec.archetype = log.archetype;
  rec.parameters = log.parameters;
  rec.validity = log.validity;
  rec.termination = log.termination;
  if (rec.validity.ok()) {
    try {
      rec.metrics = compute_run_metrics(log);
    } catch (const LogRefused& e) {
      rec.validity = e.validity();
    } catch (...) {
      rec.validity = Validity::invalid("metrics_failed");
    }
  }
  return rec;
}

CampaignReport aggregate(std::vector<RunRecord> runs) {
  std::sort(runs.begin(), runs.end(),
            [](const RunRecord& a, const RunRecord& b) { return a.ordinal < b.ordinal; });
  CampaignReport r;
  r.scenario_count = runs.size();
  for (RiskLevel level : {RiskLevel::kLow, RiskLevel::kMedium, RiskLevel::kHigh}) {
    r.risk_histogram[std::string(risk_name(level))] = 0;
  }
  std::vector<double> ttc, dmin, pet, decel;
  std::size_t with_violation = 0;
  std::map<ArchetypeId, GroupAccumulator> by_arch;
  for (const auto& run : runs) {
    if (!run.metrics) {
      ++r.invalid_count;
      ++r.invalid_reasons[run.validity.reason.empty() ? run.validity.to_string()
                                                      : run.validity.reason];
      continue;
    }
    const ScenarioMetrics& m = *run.metrics;
    ++r.valid_count;
    if (m.collision) ++r.collision_count;
    if (std::isfinite(m.ttc_min)) ttc.push_back(m.ttc_min);
    if (std::isfinite(m.d_min)) dmin.push_back(m.d_min);
    if (m.pet) pet.push_back(*m.pet);
    decel.push_back(m.max_decel);
    r.threshold_violations_total += m.threshold_violations;
    if (m.threshold_violations > 0) ++with_violation;
    ++r.risk_histogram[std::string(risk_name(m.risk))];
    by_arch[run.archetype].add(m);
  }
  if (r.valid_count > 0) {
    const auto valid = static_cast<double>(r.valid_count);
    r.collision_rate = static_cast<double>(r.collision_count) / valid;
    r.violation_fraction = static_cast<double>(with_violation) / valid;
  }
  r.ttc_min = stat_of(ttc);
  r.d_min = stat_of(dmin);
  r.pet = stat_of(pet);
  r.max_decel = stat_of(decel);
  for (const auto& [id, acc] : by_arch) {
    r.by_archetype.push_back(acc.finish(std::string(archetype_code(id))));
  }

  const ParameterDomain domain = default_domain();
  r.by_ego_speed_bin = binned_groups(runs, *domain.find(ParameterId::kEgoSpeed));
  r.by_approach_angle_bin = binned_groups(runs, *domain.find(ParameterId::kApproachAngle));

  if (!runs.empty()) {
    Campaign c;
    c.domain = domain;
    for (const auto& run : runs) {
      c.points.push_back(run.parameters);
      c.seeds.push_back(run.seed);
    }
    try {
      r.coverage = compute_coverage(c, domain, critical_cells(domain));
    } catch (const CoverageError&) {
      r.coverage.reset();
    }
  }
  r.runs = std::move(runs);
  return r;
}

CampaignResult run_campaign(std::span<const ScenarioSpec> specs, const CampaignOptions& options) {
  const auto start = Clock::now();
  const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
  const auto n = static_cast<std::ptrdiff_t>(specs.size());
  CampaignResult result;
  if (options.retain_logs) result.logs.resize(specs.size());
  std::vector<RunRecord> records(specs.size());
  std::vector<double> seconds(specs.size(), 0.0);
#pragma omp parallel for schedule(static, 1) num_threads(static_cast<int>(jobs))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    records[k] = run_one(k, specs[k], options,
                         options.retain_logs ? &result.logs[k] : nullptr, seconds[k]);
  }
  result.report = aggregate(std::move(records));
  result.report.timing = timing_of(jobs, start, seconds);
  return result;
}

CampaignResult run_campaign_serial(std::span<const ScenarioSpec> specs,
                                   const CampaignOptions& options) {
  const auto start = Clock::now();
  CampaignResult result;
  if (options.retain_logs) result.logs.resize(specs.size());
  std::vector<RunRecord> records(specs.size());
  std::vector<double> seconds(specs.size(), 0.0);
  for (std::size_t k = 0; k < specs.size(); ++k) {
    records[k] = run_one(k, specs[k], options,
                         options.retain_logs ? &result.logs[k] : nullptr, seconds[k]);
  }
  result.report = aggregate(std::move(records));
  result.report.timing = timing_of(1, start, seconds);
  return result;
}

std::size_t default_jobs(std::size_t fallback) {
  if (const char* env = std::getenv("SCENKIT_JOBS")) {
    if (const auto v = parse_u64(env); v && *v > 0) return static_cast<std::size_t>(*v);
  }
  return fallback;
}

}  // namespace scenkit
