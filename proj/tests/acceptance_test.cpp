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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "corrupt_logs.hpp"
#include "oracles.hpp"
#include "scenkit/compiler.hpp"
#include "scenkit/coverage.hpp"
#include "scenkit/dsl.hpp"
#include "scenkit/harness.hpp"
#include "scenkit/log_io.hpp"
#include "scenkit/metrics.hpp"
#include "scenkit/report.hpp"
#include "scenkit/sampler.hpp"
#include "test_support.hpp"

namespace scenkit {
namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome sci_exact() {
  const ParameterDomain d = default_domain();
  const Campaign grid = grid_campaign(d);
  const auto t0 = Clock::now();
  const CoverageReport r = compute_coverage(grid, d, critical_cells(d));
  const double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu points, sci_uniform=%.17g, %.3f s", grid.size(),
                r.sci_uniform, secs);
  return {r.sci_uniform == 1.0 && r.sci_weighted == 1.0 && secs < 1.0, buf};
}

Outcome sci_formula() {
  std::vector<ScenarioParameters> pts;
  for (double v : {20, 25, 30, 35, 40, 45, 50}) pts.push_back({v, 1.5, 90, 30, 0});
  Campaign c;
  c.domain = default_domain();
  c.points = pts;
  c.seeds.assign(pts.size(), 0);
  const double hand = 577.0 / 1800.0;  // (360 + 72 + 45 + 40 + 60) / 360 / 5
  const double got = compute_sci(c, c.domain).sci_uniform;
  char buf[160];
  std::snprintf(buf, sizeof buf, "sci=%.15f hand=%.15f diff=%.1e", got, hand, std::abs(got - hand));
  return {std::abs(got - hand) <= 1e-12, buf};
}

Outcome risk_table() {
  const RiskInputs rows[] = {
      {true, 1.0, 4.26, 30.01, 0.85, 2},   {false, 0.0, 3.73, 15.18, 1.12, 1},
      {false, 0.0, 3.15, 20.04, 1.35, 0},  {false, 0.0, 2.71, 21.13, 1.28, 0},
      {false, 0.0, 2.45, 12.50, 0.95, 3},  {false, 0.0, 2.98, 19.87, 1.42, 0},
  };
  const RiskLevel want[] = {RiskLevel::kLow, RiskLevel::kLow,    RiskLevel::kLow,
                            RiskLevel::kLow, RiskLevel::kMedium, RiskLevel::kLow};
  int ok = 0;
  std::string got;
  for (int i = 0; i < 6; ++i) {
    const RiskLevel r = classify_risk(rows[i]);
    ok += r == want[i];
    got += std::string(i ? "," : "") + std::string(risk_name(r));
  }
  return {ok == 6, std::to_string(ok) + "/6 (" + got + ")"};
}

// Every stratified point is run as each crossing archetype, with weather and
// lighting cycled so that every speed bin sees the same environment mix.
Outcome speed_and_angle_trends() {
  const ParameterDomain d = default_domain();
  const std::vector<ParameterId> strata(kAllParameters.begin(), kAllParameters.end());
  const Campaign c = stratified_campaign(d, d.cell_count(), 2024, strata);
  const Weather ws[3] = {Weather::kClear, Weather::kRain, Weather::kHeavyRain};
  const Lighting ls[3] = {Lighting::kDay, Lighting::kDusk, Lighting::kNight};
  std::vector<ScenarioSpec> specs;
  for (ArchetypeId a : {ArchetypeId::kS4, ArchetypeId::kS5, ArchetypeId::kS6}) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      specs.push_back(compile_scenario(a, c.points[i], Environment::make(ws[i % 3], ls[(i / 3) % 3]),
                                       c.seeds[i], "t" + std::to_string(specs.size())));
    }
  }
  CampaignOptions opt;
  opt.jobs = 8;
  opt.retain_logs = false;
  const CampaignReport r = run_campaign(specs, opt).report;

  bool ttc_down = true, collisions_up = true;
  std::string detail = std::to_string(r.valid_count) + " runs; by speed [ttc_min, collision]:";
  const auto& s = r.by_ego_speed_bin;
  for (std::size_t k = 0; k < s.size(); ++k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " %s:[%.3f,%.3f]", s[k].key.c_str(),
                  s[k].ttc_min.mean.value_or(kInf), s[k].collision_rate);
    detail += buf;
    if (k == 0) continue;
    ttc_down = ttc_down && s[k].ttc_min.mean && s[k - 1].ttc_min.mean &&
               *s[k].ttc_min.mean <= *s[k - 1].ttc_min.mean;
    collisions_up = collisions_up && s[k].collision_rate >= s[k - 1].collision_rate;
  }
  auto pooled = [&](double lo, double hi) {
    double sum = 0.0;
    std::size_t n = 0;
    const auto& axis = *d.find(ParameterId::kApproachAngle);
    for (std::size_t k = 0; k < axis.bin_count(); ++k) {
      const double centre = axis.bin_centers[k];
      const Stat& st = r.by_approach_angle_bin[k].ttc_min;
      if (centre < lo || centre > hi || !st.mean) continue;
      sum += *st.mean * static_cast<double>(st.count);
      n += st.count;
    }
    return n ? sum / static_cast<double>(n) : kInf;
  };
  const double wide = pooled(80, 100), narrow = pooled(30, 45);
  char buf[128];
  std::snprintf(buf, sizeof buf, "; ttc_min 80-100deg %.3f vs 30-45deg %.3f; (a)%s (b)%s (c)%s",
                wide, narrow, ttc_down ? "ok" : "X", collisions_up ? "ok" : "X",
                wide > narrow ? "ok" : "X");
  detail += buf;
  return {specs.size() >= 500 && ttc_down && collisions_up && wide > narrow, detail};
}

Outcome determinism() {
  testing::Gen g(5);
  std::vector<ScenarioSpec> specs;
  for (int i = 0; i < 400; ++i) specs.push_back(testing::random_spec(g, "d" + std::to_string(i)));
  auto run = [&](std::size_t jobs) {
    CampaignOptions o;
    o.jobs = jobs;
    const CampaignResult r = run_campaign(specs, o);
    std::vector<std::string> out;
    for (const auto& log : r.logs) out.push_back(write_log_csv(log));
    out.push_back(report_to_json(r.report, false));
    return out;
  };
  const auto a = run(1), b = run(8), c = run(8);
  return {a == b && b == c, std::to_string(specs.size()) + " runs; 1 vs 8 jobs " +
                                (a == b ? "identical" : "differ") + ", 8 vs 8 " +
                                (b == c ? "identical" : "differ")};
}

Outcome ttc_oracle() {
  testing::Gen g(606);
  int ok = 0, finite = 0;
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const auto [e, a, radii] = testing::random_pair(g);
    const Vec2 dp = a.position - e.position;
    const Vec2 dv = a.velocity() - e.velocity();
    const double want = oracle::ttc(dp.x, dp.y, dv.x, dv.y, radii);
    const double got = compute_ttc(e, a, radii);
    if (std::isinf(want) || std::isinf(got)) {
      ok += std::isinf(want) && std::isinf(got);
      continue;
    }
    ++finite;
    worst = std::max(worst, std::abs(got - want));
    ok += std::abs(got - want) <= 1e-3;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d/1000 agree (%d finite), worst diff %.2e s", ok, finite, worst);
  return {ok == 1000, buf};
}

Outcome collision_sweep() {
  testing::Gen g(707);
  int agree = 0, collisions = 0, bad = 0;
  double worst_depth = 0.0;
  for (int n = 0; n < 500; ++n) {
    const SimulationLog log = run_scenario(testing::random_spec(g, "c" + std::to_string(n)));
    const bool sim = log.termination == Termination::kCollision;
    const double clearance = oracle::min_clearance(log);
    const bool fine = clearance <= 0.0;
    collisions += fine;
    if (sim == fine) {
      ++agree;
      continue;
    }
    const double depth = std::abs(clearance);
    worst_depth = std::max(worst_depth, depth);
    bad += depth >= 0.05;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%d/500 agree, %d oracle collisions, worst disagreement depth %.4f m", agree,
                collisions, worst_depth);
  return {agree >= 495 && bad == 0, buf};
}

Outcome parser_round_trip() {
  testing::Gen g(808);
  int ok = 0;
  for (int i = 0; i < 200; ++i) {
    const ScenarioSpec s = testing::random_spec(g, "p-" + std::to_string(i));
    const std::string text = serialize(s);
    const ParseResult r = parse_scenarios(text);
    ok += !r.has_errors() && r.specs.size() == 1 && r.specs[0] == s &&
          serialize(r.specs[0]) == text;
  }
  return {ok == 200, std::to_string(ok) + "/200 specs round-trip and re-serialize identically"};
}

Outcome metric_oracle() {
  testing::Gen g(909);
  int ok = 0, collisions = 0;
  double worst_ttc = 0.0, worst_d = 0.0;
  for (int n = 0; n < 100; ++n) {
    const SimulationLog log = run_scenario(testing::random_spec(g, "x" + std::to_string(n)));
    const ScenarioMetrics m = compute_run_metrics(log);
    collisions += m.collision;
    const double fine_ttc = oracle::min_ttc(log);
    const double fine_d = std::max(0.0, oracle::min_clearance(log));
    bool good = true;
    if (std::isinf(m.ttc_min) || std::isinf(fine_ttc)) {
      good = std::isinf(m.ttc_min) && (std::isinf(fine_ttc) || fine_ttc > 1e3);
    } else {
      worst_ttc = std::max(worst_ttc, std::abs(m.ttc_min - fine_ttc));
      good = std::abs(m.ttc_min - fine_ttc) <= 0.05;
    }
    worst_d = std::max(worst_d, std::abs(m.d_min - fine_d));
    good = good && std::abs(m.d_min - fine_d) <= 0.05;
    ok += good;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/100 logs (%d collisions); worst ttc diff %.4f s, d diff %.4f m",
                ok, collisions, worst_ttc, worst_d);
  return {ok == 100, buf};
}

Outcome throughput() {
  const Campaign c = random_campaign(default_domain(), 1000, 1010);
  const std::vector<ArchetypeId> arch(kAllArchetypes.begin(), kAllArchetypes.end());
  const auto specs =
      make_manifest(c, arch, Environment::make(Weather::kRain, Lighting::kDusk), 30.0, "tp")
          .specs();
  CampaignOptions opt;
  opt.jobs = 8;
  const auto t0 = Clock::now();
  const CampaignResult r = run_campaign(specs, opt);
  const double secs = seconds_since(t0);
  double simulated = 0.0;
  std::size_t full = 0;
  for (const auto& log : r.logs) {
    if (log.frames.empty()) continue;
    simulated += log.frames.back().t;
    full += log.termination == Termination::kDurationElapsed;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu scenarios (%zu ran the full 30 s, %.0f s simulated), 8 jobs, %.2f s wall",
                specs.size(), full, simulated, secs);
  return {specs.size() == 1000 && r.report.scenario_count == 1000 && secs < 60.0, buf};
}

Outcome corrupt_logs() {
  const SimulationLog good = run_scenario(compile_scenario(
      ArchetypeId::kS5, {30, 1.5, 90, 40, 1.0}, Environment::make(Weather::kRain, Lighting::kDusk),
      9, "good", 4.0));
  const auto corpus = testing::corrupt_corpus(write_log_csv(good));
  const auto dir = std::filesystem::temp_directory_path() / "scenkit_acceptance_corpus";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "good.csv") << write_log_csv(good);
  for (const auto& c : corpus) std::ofstream(dir / (c.name + ".csv")) << c.text;

  int right = 0;
  std::size_t invalid = 0, valid = 0;
  try {
    std::vector<RunRecord> records;
    for (const auto& in : ingest_logs(dir)) {
      const std::string stem = in.path.stem().string();
      const RunRecord rec = evaluate_log(records.size(), in.log);
      records.push_back(rec);
      if (stem == "good") continue;
      for (const auto& c : corpus) {
        if (c.name == stem) right += !rec.metrics && rec.validity.reason == c.reason;
      }
    }
    const CampaignReport rep = aggregate(records);
    invalid = rep.invalid_count;
    valid = rep.valid_count;
  } catch (const std::exception& e) {
    std::filesystem::remove_all(dir);
    return {false, std::string("analysis aborted: ") + e.what()};
  }
  std::filesystem::remove_all(dir);
  const std::string detail = std::to_string(right) + "/" + std::to_string(corpus.size()) +
                             " flagged with the expected reason; batch: " + std::to_string(valid) +
                             " valid, " + std::to_string(invalid) + " invalid";
  return {right == static_cast<int>(corpus.size()) && invalid == corpus.size() && valid == 1,
          detail};
}

}  // namespace
}  // namespace scenkit

int main() {
  using namespace scenkit;
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"sci-exact-full-grid", sci_exact},
      {"sci-partial-formula", sci_formula},
      {"risk-classifier-table", risk_table},
      {"speed-and-angle-trends", speed_and_angle_trends},
      {"determinism", determinism},
      {"ttc-oracle", ttc_oracle},
      {"collision-sweep", collision_sweep},
      {"parser-round-trip", parser_round_trip},
      {"metric-oracle", metric_oracle},
      {"throughput-budget", throughput},
      {"corrupt-log-corpus", corrupt_logs},
  };
  int failed = 0;
  int k = 0;
  for (const auto& [name, fn] : criteria) {
    ++k;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
