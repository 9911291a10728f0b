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

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "scenkit/compiler.hpp"
#include "scenkit/log_io.hpp"
#include "scenkit/metrics.hpp"
#include "scenkit/simulator.hpp"
#include "test_support.hpp"

namespace scenkit {
namespace {

ScenarioSpec make(ArchetypeId a, double ego, double agent, double angle, double dist, double onset,
                  Weather w = Weather::kClear, Lighting l = Lighting::kDay) {
  return compile_scenario(a, {ego, agent, angle, dist, onset}, Environment::make(w, l), 1, "t");
}

TEST(Collision, DiscExamples) {
  EXPECT_FALSE(detect_collision({0, 0}, {2.0, 0}, 1.3));
  EXPECT_TRUE(detect_collision({0, 0}, {0, 0}, 1.3));
  EXPECT_TRUE(detect_collision({0, 0}, {1.3, 0}, 1.3));
}

// Endpoints clear on both frames, but the bodies pass through each other in
// between. A 1 kHz replay of the same straight-line motion sees the contact.
TEST(Collision, SweptContactBetweenFrames) {
  const Vec2 e0{0, 0}, e1{1.0, 0};
  const Vec2 a0{0.5, 3.0}, a1{0.5, -3.0};
  EXPECT_FALSE(detect_collision(e1, a1, 1.3));
  EXPECT_FALSE(detect_collision(e0, a0, 1.3));
  double closest = oracle::kInf;
  for (int s = 0; s <= 50; ++s) {
    const auto e = oracle::lerp(e0, e1, s / 50.0);
    const auto a = oracle::lerp(a0, a1, s / 50.0);
    closest = std::min(closest, oracle::len(a.x - e.x, a.y - e.y));
  }
  EXPECT_LE(closest, 1.3);
  EXPECT_TRUE(detect_collision(e0, e1, a0, a1, 1.3));
  // Shifted far enough sideways the sweep stays clear too.
  EXPECT_FALSE(detect_collision(e0, e1, a0 + Vec2{3.0, 0}, a1 + Vec2{3.0, 0}, 1.3));
}

TEST(Perception, OccluderBlocksAndDelayApplies) {
  const std::vector<Disc> occ = {{{10.0, 0.0}, 1.0}};
  EXPECT_FALSE(line_of_sight({0, 0}, {20, 0}, occ));
  EXPECT_TRUE(line_of_sight({0, 0}, {20, 5}, occ));

  Perception p(1, 0.3, 60.0);
  std::vector<AgentState> actors(1);
  actors[0].position = {20.0, 0.0};
  const std::vector<std::uint8_t> yes = {1};
  std::vector<std::uint8_t> det;
  const std::vector<Disc> none;
  p.update(0.0, {0, 0}, actors, yes, none, det);
  EXPECT_EQ(det[0], 0);
  p.update(0.25, {0, 0}, actors, yes, none, det);
  EXPECT_EQ(det[0], 0);
  p.update(0.3, {0, 0}, actors, yes, none, det);
  EXPECT_EQ(det[0], 1);
  // Behind the occluder: not detected.
  Perception q(1, 0.0, 60.0);
  q.update(0.0, {0, 0}, actors, yes, occ, det);
  EXPECT_EQ(det[0], 0);
  // Out of range.
  actors[0].position = {61.0, 0.0};
  Perception r(1, 0.0, 60.0);
  r.update(0.0, {0, 0}, actors, yes, none, det);
  EXPECT_EQ(det[0], 0);
}

TEST(Run, InvalidSpecIsRejectedBeforeStepping) {
  ScenarioSpec s = make(ArchetypeId::kS4, 35, 1.5, 90, 30, 0);
  s.environment.friction = -1.0;
  EXPECT_THROW(run_scenario(s), SpecError);
}

TEST(Run, PedestrianAtFiftyMetresIsAvoided) {
  const SimulationLog log = run_scenario(make(ArchetypeId::kS4, 35, 1.5, 90, 50, 0));
  ASSERT_TRUE(log.validity.ok());
  const ScenarioMetrics m = compute_run_metrics(log);
  EXPECT_FALSE(m.collision);
  EXPECT_GT(m.d_min, 0.0);
  EXPECT_GT(m.max_decel, 0.0);
  EXPECT_TRUE(m.brake_onset.has_value());
  EXPECT_GT(oracle::min_clearance(log), 0.0);
}

TEST(Run, LeadHardBrakeInHeavyRainAtNightCollides) {
  // 8 m/s^2 braking lead: agent_speed 2.5 maps to 3.2 * 2.5 = 8.
  const SimulationLog log = run_scenario(
      make(ArchetypeId::kS1, 50, 2.5, 90, 10, 0, Weather::kHeavyRain, Lighting::kNight));
  ASSERT_TRUE(log.validity.ok());
  EXPECT_EQ(log.termination, Termination::kCollision);
  EXPECT_TRUE(log.frames.back().collision);
  EXPECT_LE(oracle::min_clearance(log), 0.0);
}

TEST(Run, SameSpecGivesByteIdenticalLogs) {
  testing::Gen g(3);
  for (int i = 0; i < 20; ++i) {
    const ScenarioSpec s = testing::random_spec(g, "d" + std::to_string(i));
    const SimulationLog a = run_scenario(s);
    const SimulationLog b = run_scenario(s);
    EXPECT_EQ(a, b);
    EXPECT_EQ(write_log_csv(a), write_log_csv(b));
  }
}

// Stationary obstacle in lane: once full braking starts the ego stops in
// v / (mu g), give or take one frame.
TEST(Run, FullBrakeStoppingTime) {
  for (const Weather w : {Weather::kClear, Weather::kRain, Weather::kHeavyRain}) {
    // Close enough for emergency braking on first detection, far enough that
    // even heavy rain stops short.
    ScenarioSpec s = make(ArchetypeId::kS1, 30, 1.0, 90, 20, 0, w);
    s.actors[1].speed = 0.0;
    s.actors[1].position.x = 16.0;
    s.triggers.clear();
    const SimulationLog log = run_scenario(s);
    ASSERT_TRUE(log.validity.ok());
    ASSERT_NE(log.termination, Termination::kCollision);
    const auto& f = log.frames;
    const auto onset = std::find_if(f.begin(), f.end(), [](const Frame& x) { return x.brake_cmd == 1.0; });
    ASSERT_NE(onset, f.end());
    const double mu_g = s.environment.friction * kGravity;
    const double expected = onset->ego.speed / mu_g;
    const auto stop = std::find_if(onset, f.end(), [](const Frame& x) { return x.ego.speed < 0.1; });
    ASSERT_NE(stop, f.end());
    const double measured = stop->t - onset->t;
    EXPECT_NEAR(measured, expected, kControlPeriod) << weather_name(w);
  }
}

// Property sweep over random specs.
TEST(Run, Invariants) {
  testing::Gen g(17);
  for (int n = 0; n < 300; ++n) {
    const ScenarioSpec s = testing::random_spec(g, "i" + std::to_string(n));
    const SimulationLog log = run_scenario(s);
    ASSERT_TRUE(log.validity.ok()) << s.id;
    ASSERT_FALSE(log.frames.empty());
    const double mu_g = s.environment.friction * kGravity;
    for (std::size_t k = 0; k < log.frames.size(); ++k) {
      const Frame& f = log.frames[k];
      ASSERT_NEAR(f.t, static_cast<double>(k) * kControlPeriod, 1e-12);
      ASSERT_GE(f.ego.speed, 0.0);
      ASSERT_EQ(f.actors.size(), log.actors.size());
      if (k > 0) {
        const Frame& p = log.frames[k - 1];
        ASSERT_LE(std::abs(f.ego.speed - p.ego.speed), mu_g * kControlPeriod + 1e-9);
        ASSERT_LE(norm(f.ego.position - p.ego.position),
                  std::max(f.ego.speed, p.ego.speed) * kControlPeriod +
                      0.5 * mu_g * kControlPeriod * kControlPeriod + 1e-9);
      }
      // Collision ends the run on that frame.
      if (f.collision) {
        ASSERT_EQ(k + 1, log.frames.size());
        ASSERT_EQ(log.termination, Termination::kCollision);
      }
      // Never detected through an occluder.
      for (std::size_t i = 0; i < log.actors.size(); ++i) {
        if (f.detected[i]) ASSERT_TRUE(oracle::clear_sight(log, k, i)) << s.id << " t=" << f.t;
      }
    }
    // Collision flag agrees with the 1 kHz replay, up to grazing contact.
    const double clearance = oracle::min_clearance(log);
    if (log.termination == Termination::kCollision) {
      EXPECT_LE(clearance, 1e-9) << s.id;
    } else {
      EXPECT_GT(clearance, -0.05) << s.id;
    }
  }
}

// The child is detected on the first frame at least the full delay after
// it first comes into clear sight, with the sight line checked by brute
// force against the parked row.
TEST(Run, OccludedChildDetectionTime) {
  for (const Lighting l : {Lighting::kDay, Lighting::kDusk, Lighting::kNight}) {
    for (double dist : {15.0, 25.0, 40.0}) {
      const ScenarioSpec s = make(ArchetypeId::kS5, 30, 1.5, 90, dist, 1.0, Weather::kClear, l);
      const SimulationLog log = run_scenario(s);
      ASSERT_TRUE(log.validity.ok());
      std::size_t child = 0;
      while (log.actors[child].kind != ActorKind::kPedestrianChild) ++child;
      const double delay = 0.3 + default_detection_delay(l);
      std::optional<double> visible;
      std::optional<double> expected;
      for (std::size_t k = 0; k < log.frames.size(); ++k) {
        const Frame& f = log.frames[k];
        if (!log.trigger_time || f.t < *log.trigger_time - 1e-9) continue;
        const bool in_range = norm(f.actors[child].position - f.ego.position) <= 60.0;
        const bool clear = oracle::clear_sight(log, k, child);
        if (!visible && clear && in_range) visible = f.t;
        if (visible && !expected && clear && f.t >= *visible + delay - 1e-9) expected = f.t;
      }
      std::optional<double> detected;
      for (const Frame& f : log.frames) {
        if (f.detected[child]) {
          detected = f.t;
          break;
        }
      }
      ASSERT_EQ(detected.has_value(), expected.has_value()) << lighting_name(l) << " " << dist;
      if (detected) {
        EXPECT_NEAR(*detected, *expected, 1e-9) << lighting_name(l) << " " << dist;
      }
    }
  }
}

TEST(Run, TriggerTakesEffectFromTheNextStep) {
  const SimulationLog log = run_scenario(make(ArchetypeId::kS4, 35, 1.5, 90, 40, 2.0));
  ASSERT_TRUE(log.trigger_time.has_value());
  EXPECT_NEAR(*log.trigger_time, 2.0, 1e-9);
  const std::size_t k = static_cast<std::size_t>(std::lround(2.0 / kControlPeriod));
  const auto& ped0 = log.frames[0].actors[0].position;
  EXPECT_EQ(log.frames[k].actors[0].position, ped0);
  EXPECT_NE(log.frames[k + 1].actors[0].position, ped0);
  EXPECT_NEAR(norm(log.frames[k + 1].actors[0].position - ped0), 1.5 * kControlPeriod, 1e-12);
}

TEST(Run, EveryArchetypeTerminates) {
  for (ArchetypeId a : kAllArchetypes) {
    const SimulationLog log = run_scenario(make(a, 35, 1.5, 90, 30, 1.0));
    ASSERT_TRUE(log.validity.ok()) << archetype_code(a);
    EXPECT_LE(log.frames.back().t, 30.0 + 1e-9);
  }
}

TEST(Run, EvasionOnlyWhereSteeringIsAllowed) {
  testing::Gen g(23);
  for (int n = 0; n < 200; ++n) {
    const ScenarioSpec s = testing::random_spec(g, "e" + std::to_string(n));
    const SimulationLog log = run_scenario(s);
    const bool steered = std::any_of(log.frames.begin(), log.frames.end(),
                                     [](const Frame& f) { return f.steer_cmd != 0.0; });
    if (!archetype(s.archetype).steering_allowed) EXPECT_FALSE(steered) << s.id;
    for (const Frame& f : log.frames) {
      ASSERT_LE(std::abs(f.steer_cmd), 1.0);
      ASSERT_GE(f.brake_cmd, 0.0);
      ASSERT_LE(f.brake_cmd, 1.0);
    }
  }
}

TEST(Config, Problems) {
  EXPECT_TRUE(EgoControllerConfig{}.problems().empty());
  EgoControllerConfig c;
  c.emergency_ttc = 4.0;
  EXPECT_FALSE(c.problems().empty());
  c = {};
  c.control_period = 0.01;
  EXPECT_FALSE(c.problems().empty());
}

TEST(Validity, TextRoundTrip) {
  for (const Validity& v : {Validity::complete(), Validity::truncated("truncated"),
                            Validity::truncated("missing_rows"), Validity::invalid("bad_number")}) {
    EXPECT_EQ(Validity::parse(v.to_string()), v) << v.to_string();
  }
  EXPECT_FALSE(Validity::parse("broken").has_value());
  EXPECT_FALSE(Validity::parse("invalid()").has_value());
}

}  // namespace
}  // namespace scenkit
