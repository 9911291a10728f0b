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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "scenkit/compiler.hpp"
#include "scenkit/metrics.hpp"
#include "scenkit/simulator.hpp"
#include "test_support.hpp"

namespace scenkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

AgentState at(Vec2 p, double heading, double speed) { return {p, heading, speed, 0.0, 0.0}; }

// The six reference tuples, in table order, with the first row's impact
// speed placed in the low band.
struct RiskRow {
  RiskInputs in;
  RiskLevel expected;
};
std::vector<RiskRow> risk_rows() {
  return {
      {{true, 1.0, 4.26, 30.01, 0.85, 2}, RiskLevel::kLow},
      {{false, 0.0, 3.73, 15.18, 1.12, 1}, RiskLevel::kLow},
      {{false, 0.0, 3.15, 20.04, 1.35, 0}, RiskLevel::kLow},
      {{false, 0.0, 2.71, 21.13, 1.28, 0}, RiskLevel::kLow},
      {{false, 0.0, 2.45, 12.50, 0.95, 3}, RiskLevel::kMedium},
      {{false, 0.0, 2.98, 19.87, 1.42, 0}, RiskLevel::kLow},
  };
}

TEST(Risk, ReferenceTableSixOfSix) {
  for (const auto& row : risk_rows()) {
    EXPECT_EQ(classify_risk(row.in), row.expected) << row.in.ttc_min;
  }
}

TEST(Risk, RuleBoundaries) {
  RiskInputs m{false, 0.0, 5.0, 30.0, std::nullopt, 0};
  EXPECT_EQ(classify_risk(m), RiskLevel::kLow);
  m.ttc_min = 0.49;
  EXPECT_EQ(classify_risk(m), RiskLevel::kHigh);
  m.ttc_min = 0.5;
  EXPECT_EQ(classify_risk(m), RiskLevel::kLow);
  m.collision = true;
  m.impact_dv = 2.0;
  EXPECT_EQ(classify_risk(m), RiskLevel::kHigh);
  m.impact_dv = 1.99;
  EXPECT_EQ(classify_risk(m), RiskLevel::kLow);
  m = {false, 0.0, 5.0, 14.9, 0.99, 0};
  EXPECT_EQ(classify_risk(m), RiskLevel::kMedium);
  m.d_min = 15.0;
  EXPECT_EQ(classify_risk(m), RiskLevel::kLow);
  m.threshold_violations = 3;
  EXPECT_EQ(classify_risk(m), RiskLevel::kMedium);
  EXPECT_EQ(risk_from_name("Medium"), RiskLevel::kMedium);
  EXPECT_FALSE(risk_from_name("medium").has_value());
}

// Moving any input in the riskier direction never lowers the class.
TEST(Risk, Monotone) {
  testing::Gen g(31);
  for (int n = 0; n < 20000; ++n) {
    RiskInputs m;
    m.collision = g.coin();
    m.impact_dv = m.collision ? g.uniform(0.0, 4.0) : 0.0;
    m.ttc_min = g.coin(0.1) ? kInf : g.uniform(0.0, 6.0);
    m.d_min = g.uniform(0.0, 40.0);
    if (g.coin(0.7)) m.pet = g.uniform(0.0, 3.0);
    m.threshold_violations = g.index(6);
    const RiskLevel base = classify_risk(m);
    RiskInputs w = m;
    switch (g.index(5)) {
      case 0: w.threshold_violations += 1 + g.index(3); break;
      case 1: w.impact_dv += g.uniform(0.0, 2.0); break;
      case 2: w.ttc_min = std::isinf(w.ttc_min) ? g.uniform(0.0, 6.0) : w.ttc_min * g.unit(); break;
      case 3: if (w.pet) w.pet = *w.pet * g.unit(); break;
      default: w.d_min *= g.unit(); break;
    }
    ASSERT_GE(static_cast<int>(classify_risk(w)), static_cast<int>(base));
  }
}

TEST(Ttc, HeadOnAndReceding) {
  // Gap between discs 20 m, closing at 10 m/s.
  EXPECT_DOUBLE_EQ(compute_ttc(at({0, 0}, 0, 5), at({22, 0}, 180, 5), 2.0), 2.0);
  EXPECT_EQ(compute_ttc(at({0, 0}, 180, 5), at({22, 0}, 0, 5), 2.0), kInf);
  EXPECT_EQ(compute_ttc(at({0, 0}, 0, 5), at({22, 0}, 0, 5), 2.0), kInf);
  // Overlapping discs.
  EXPECT_EQ(compute_ttc(at({0, 0}, 0, 5), at({1, 0}, 0, 0), 2.0), 0.0);
}

// Offsets (30, 10), speeds 10 and 2 m/s, radii 1.3. Closest approach of the
// relative motion is |30*(-2) - 10*(-10)| / sqrt(104) = 40 / 10.198 = 3.92 m,
// so the discs never touch. Moving the crosser to (30, 6) puts it on a
// direct collision course: (sqrt(936) - 1.3) / sqrt(104).
TEST(Ttc, PerpendicularCrossing) {
  const AgentState ego = at({0, 0}, 0, 10);
  EXPECT_EQ(compute_ttc(ego, at({30, 10}, -90, 2), 1.3), kInf);
  EXPECT_EQ(oracle::ttc(30, 10, -10, -2, 1.3), kInf);
  const double hand = (std::sqrt(936.0) - 1.3) / std::sqrt(104.0);
  EXPECT_NEAR(compute_ttc(ego, at({30, 6}, -90, 2), 1.3), hand, 1e-12);
  EXPECT_NEAR(oracle::ttc(30, 6, -10, -2, 1.3), hand, 1e-3);
}

TEST(Ttc, AgreesWithMarchingOracle) {
  testing::Gen g(41);
  int finite = 0;
  for (int n = 0; n < 2000; ++n) {
    const auto [e, a, radii] = testing::random_pair(g);
    const Vec2 dp = a.position - e.position;
    const Vec2 dv = a.velocity() - e.velocity();
    const double want = oracle::ttc(dp.x, dp.y, dv.x, dv.y, radii);
    const double got = compute_ttc(e, a, radii);
    if (std::isinf(want)) {
      ASSERT_TRUE(std::isinf(got)) << n;
    } else {
      ++finite;
      ASSERT_NEAR(got, want, 1e-3) << n;
    }
  }
  EXPECT_GT(finite, 500);
}

TEST(Violations, MaximalRuns) {
  const std::vector<double> none = {3, 2.5, 2, 2, 4};
  EXPECT_EQ(count_threshold_violations(none), 0u);
  std::vector<double> one(20, 3.0);
  for (int k = 5; k < 13; ++k) one[k] = 1.0;
  EXPECT_EQ(count_threshold_violations(one), 1u);
  std::vector<double> two = one;
  two[16] = 1.19;
  EXPECT_EQ(count_threshold_violations(two), 2u);
  const std::vector<double> edge = {1.2, 1.2, kInf, 0.0};
  EXPECT_EQ(count_threshold_violations(edge), 1u);
}

// Random traces against a plain run-length scan.
TEST(Violations, RunLengthOracle) {
  testing::Gen g(43);
  for (int n = 0; n < 500; ++n) {
    std::vector<double> ttc(g.index(200));
    for (double& v : ttc) v = g.coin(0.1) ? kInf : g.uniform(0.0, 3.0);
    std::size_t runs = 0;
    for (std::size_t i = 0; i < ttc.size(); ++i) {
      if (ttc[i] < 1.2 && (i == 0 || !(ttc[i - 1] < 1.2))) ++runs;
    }
    ASSERT_EQ(count_threshold_violations(ttc), runs);
  }
}

// Log synthesis: straight-line motions sampled at 20 Hz, ttc filled in by
// the marching oracle from each frame's displacement velocity.
struct Mover {
  Vec2 p0;
  Vec2 v;
  double stop_at = kInf;  // s; stands still from here on
  Vec2 pos(double t) const { return p0 + v * std::min(t, stop_at); }
};

SimulationLog synth(const Mover& ego, ActorKind kind, const Mover& actor, double duration) {
  SimulationLog log;
  log.spec_id = "synth";
  log.duration = duration;
  log.actors = {{1, kind, default_body_radius(kind)}};
  const double radii = log.ego_radius + log.actors[0].radius;
  const auto steps = static_cast<std::size_t>(std::lround(duration / kControlPeriod));
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * kControlPeriod;
    const double tp = k == 0 ? 0.0 : t - kControlPeriod;
    auto state = [&](const Mover& m) {
      const Vec2 disp = k == 0 ? m.v : (m.pos(t) - m.pos(tp)) * (1.0 / kControlPeriod);
      const double speed = norm(disp);
      const double heading = speed > 0 ? rad_to_deg(std::atan2(disp.y, disp.x))
                                       : rad_to_deg(std::atan2(m.v.y, m.v.x));
      return at(m.pos(t), heading, speed);
    };
    Frame f;
    f.t = t;
    f.ego = state(ego);
    f.actors = {state(actor)};
    f.detected = {1};
    const Vec2 dp = f.actors[0].position - f.ego.position;
    const Vec2 dv = f.actors[0].velocity() - f.ego.velocity();
    f.ttc = oracle::ttc(dp.x, dp.y, dv.x, dv.y, radii);
    f.gap = std::max(0.0, norm(dp) - radii);
    f.collision = norm(dp) <= radii;
    log.frames.push_back(f);
  }
  return log;
}

TEST(Pet, DefinitionalSubtraction) {
  // Conflict point (50, 0), zone radius 2. The ego leaves the zone at
  // x = 52, t = 5.0; the pedestrian enters it at y = -2, t = 6.2.
  const Mover ego{{2.0, 0.0}, {10.0, 0.0}};
  const Mover ped{{50.0, -8.2}, {0.0, 1.0}};
  const SimulationLog log = synth(ego, ActorKind::kPedestrianAdult, ped, 8.0);
  const auto pet = compute_pet(log);
  ASSERT_TRUE(pet.has_value());
  EXPECT_NEAR(*pet, 1.2, 1e-9);
}

TEST(Pet, UndefinedCases) {
  const Mover ego{{0.0, 0.0}, {10.0, 0.0}};
  // Parallel paths.
  EXPECT_FALSE(compute_pet(synth(ego, ActorKind::kCyclist, {{0.0, 5.0}, {3.0, 0.0}}, 6.0)));
  // Obstacle first.
  EXPECT_FALSE(compute_pet(synth(ego, ActorKind::kPedestrianAdult, {{50.0, -3.0}, {0.0, 1.5}}, 8.0)));
  // Obstacle never reaches the zone.
  EXPECT_FALSE(compute_pet(
      synth(ego, ActorKind::kPedestrianAdult, {{50.0, -10.0}, {0.0, 1.0}, 2.0}, 8.0)));
}

// Closed-form crossing times for a constant-speed pedestrian: the ego
// (x0 = -30, 12 m/s) leaves the zone around (0, 0) at (2 + 30) / 12 s; the
// pedestrian (y0 = -9, 1.4 m/s) enters at (9 - 2) / 1.4 s.
TEST(Pet, ClosedFormCrossingTimes) {
  const Mover ego{{-30.0, 0.0}, {12.0, 0.0}};
  const Mover ped{{0.0, -9.0}, {0.0, 1.4}};
  const auto pet = compute_pet(synth(ego, ActorKind::kPedestrianAdult, ped, 10.0));
  ASSERT_TRUE(pet.has_value());
  EXPECT_NEAR(*pet, 7.0 / 1.4 - 32.0 / 12.0, 1e-9);
}

TEST(Pet, RigidMotionInvariance) {
  testing::Gen g(47);
  const Mover ego{{-30.0, 0.0}, {12.0, 0.0}};
  const Mover ped{{0.0, -9.0}, {0.3, 1.4}};
  const SimulationLog base = synth(ego, ActorKind::kPedestrianAdult, ped, 10.0);
  const double pet = *compute_pet(base);
  for (int n = 0; n < 50; ++n) {
    const double rot = g.uniform(-180, 180);
    const Vec2 shift{g.uniform(-1e3, 1e3), g.uniform(-1e3, 1e3)};
    const Vec2 ux = heading_unit(rot), uy = heading_unit(rot + 90);
    auto move = [&](AgentState& s) {
      s.position = ux * s.position.x + uy * s.position.y + shift;
      s.heading += rot;
    };
    SimulationLog log = base;
    for (Frame& f : log.frames) {
      move(f.ego);
      for (auto& a : f.actors) move(a);
    }
    const auto moved = compute_pet(log);
    ASSERT_TRUE(moved.has_value());
    EXPECT_NEAR(*moved, pet, 1e-6);
  }
}

// A cyclist on a direct collision course stops (brakes to a halt) the
// moment its TTC reaches 3.15 s; the extractor must recover that minimum.
TEST(RunMetrics, ReplayedTtcMinimum) {
  const double v_ego = 40.0 / 3.6;
  const Vec2 vc = heading_unit(100.0) * 4.0;
  const Vec2 rel_v = vc - Vec2{v_ego, 0.0};
  const double radii = 1.0 + 0.5;
  const double t_stop = 2.0;
  const double t_centre = t_stop + 3.15 + radii / norm(rel_v);
  const Mover ego{{0.0, 0.0}, {v_ego, 0.0}};
  const Mover cyc{Vec2{0.0, 0.0} - rel_v * t_centre, vc, t_stop};
  const SimulationLog log = synth(ego, ActorKind::kCyclist, cyc, 5.0);
  const ScenarioMetrics m = compute_run_metrics(log);
  EXPECT_NEAR(m.ttc_min, 3.15, 0.05);
  EXPECT_FALSE(m.collision);
  EXPECT_EQ(m.threshold_violations, 0u);
}

TEST(RunMetrics, NoInteraction) {
  const SimulationLog log = synth({{0, 0}, {10, 0}}, ActorKind::kPedestrianAdult,
                                  {{-50, 20}, {0, 0}}, 5.0);
  const ScenarioMetrics m = compute_run_metrics(log);
  EXPECT_FALSE(m.collision);
  EXPECT_EQ(m.threshold_violations, 0u);
  EXPECT_EQ(m.risk, RiskLevel::kLow);
  EXPECT_EQ(m.ttc_min, kInf);
  EXPECT_EQ(m.impact_dv, 0.0);
  EXPECT_FALSE(m.brake_onset.has_value());
}

TEST(RunMetrics, RefusesIncompleteLogs) {
  SimulationLog log = synth({{0, 0}, {10, 0}}, ActorKind::kCyclist, {{30, 0}, {0, 0}}, 1.0);
  log.validity = Validity::truncated("truncated");
  try {
    compute_run_metrics(log);
    FAIL();
  } catch (const LogRefused& e) {
    EXPECT_EQ(e.validity(), log.validity);
  }
  log.validity = Validity::invalid("bad_number");
  EXPECT_THROW(compute_pet(log), LogRefused);
  EXPECT_THROW(count_threshold_violations(log), LogRefused);
}

// Simulator logs: frame TTC is compute_ttc over hazards, d_min vanishes
// exactly on collision, and both minima match the 1 kHz replay.
TEST(RunMetrics, SimulatorLogProperties) {
  testing::Gen g(53);
  int collisions = 0;
  for (int n = 0; n < 200; ++n) {
    const ScenarioSpec s = testing::random_spec(g, "m" + std::to_string(n));
    const SimulationLog log = run_scenario(s);
    const ScenarioMetrics m = compute_run_metrics(log);
    double ttc_min = kInf;
    for (const Frame& f : log.frames) {
      double frame_ttc = kInf;
      for (std::size_t i = 0; i < log.actors.size(); ++i) {
        if (!log.actors[i].hazard()) continue;
        frame_ttc = std::min(frame_ttc, compute_ttc(f.ego, f.actors[i],
                                                    log.ego_radius + log.actors[i].radius));
      }
      ASSERT_EQ(frame_ttc, f.ttc);
      ttc_min = std::min(ttc_min, frame_ttc);
    }
    ASSERT_EQ(m.ttc_min, ttc_min);
    ASSERT_EQ(m.d_min == 0.0, m.collision) << s.id;
    collisions += m.collision;
    if (m.collision) EXPECT_GT(m.impact_dv, 0.0);
    const double fine_ttc = oracle::min_ttc(log);
    if (std::isinf(m.ttc_min)) {
      EXPECT_TRUE(std::isinf(fine_ttc) || fine_ttc > 1e3) << s.id;
    } else {
      EXPECT_NEAR(m.ttc_min, fine_ttc, 0.05) << s.id;
    }
    EXPECT_NEAR(m.d_min, std::max(0.0, oracle::min_clearance(log)), 0.05) << s.id;
    if (m.pet) EXPECT_GE(*m.pet, 0.0);
  }
  EXPECT_GT(collisions, 0);
}

TEST(Csv, RowMatchesHeader) {
  const SimulationLog log = run_scenario(
      compile_scenario(ArchetypeId::kS4, nominal_parameters(), {}, 5, "row"));
  const std::string row = metrics_csv_row(log, compute_run_metrics(log));
  const auto cols = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  EXPECT_EQ(cols(row), cols(metrics_csv_header()));
  EXPECT_EQ(row.rfind("row,5,S4,", 0), 0u);
}

}  // namespace
}  // namespace scenkit
