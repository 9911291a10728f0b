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

#ifndef SCENKIT_SIMULATOR_HPP_
#define SCENKIT_SIMULATOR_HPP_

// Fixed-step 2D kinematics for one scenario: scripted actors, a rule-based
// ego controller with delayed, occludable perception, and per-frame logging.
//
// Step k -> k+1 (dt = 0.05 s), semi-implicit Euler:
//   v' = max(0, v + a dt);  h' = h + omega dt;  p' = p + v' u(h') dt
// so a frame's velocity vector equals its displacement from the previous
// frame divided by dt.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scenkit/geometry.hpp"
#include "scenkit/model.hpp"

namespace scenkit {

struct AgentState {
  Vec2 position;
  double heading = 0.0;               // deg
  double speed = 0.0;                 // m/s, >= 0
  double acceleration = 0.0;          // m/s^2 along heading
  double lateral_acceleration = 0.0;  // m/s^2

  Vec2 velocity() const { return heading_unit(heading) * speed; }

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct EgoControllerConfig {
  double comfort_ttc = 3.0;         // s
  double emergency_ttc = 1.8;       // s
  double comfort_decel = 3.5;       // m/s^2
  double perception_range = 60.0;   // m
  double base_detection_delay = 0.3;  // s
  double lateral_limit = 3.0;       // m/s^2
  double evade_offset = 2.5;        // m, lateral target of an evasive manoeuvre
  double max_evade_heading = 30.0;  // deg
  double steer_kp = 1.5;            // 1/s^2
  double steer_kd = 2.0;            // 1/s
  double control_period = kControlPeriod;

  // Empty when usable.
  std::vector<std::string> problems() const;
};

struct Frame {
  double t = 0.0;
  AgentState ego;
  double brake_cmd = 0.0;  // [0, 1] of mu g
  double steer_cmd = 0.0;  // [-1, 1] of the lateral limit, positive left
  std::vector<AgentState> actors;     // every non-ego actor, spec order
  std::vector<std::uint8_t> detected;
  double ttc = 0.0;  // s; infinity when no hazard is on a collision course
  double gap = 0.0;  // m; smallest body-to-body distance to a hazard
  bool collision = false;

  friend bool operator==(const Frame&, const Frame&) = default;
};

enum class Termination { kDurationElapsed, kCollision, kEgoStoppedClear };
std::string_view termination_name(Termination t);
std::optional<Termination> termination_from_name(std::string_view name);

enum class ValidityKind { kComplete, kTruncated, kInvalid };

struct Validity {
  ValidityKind kind = ValidityKind::kComplete;
  std::string reason;  // reason code unless complete

  static Validity complete() { return {}; }
  static Validity truncated(std::string reason) {
    return {ValidityKind::kTruncated, std::move(reason)};
  }
  static Validity invalid(std::string reason) {
    return {ValidityKind::kInvalid, std::move(reason)};
  }
  bool ok() const { return kind == ValidityKind::kComplete; }
  // "complete", "truncated", "truncated(reason)" or "invalid(reason)"
  std::string to_string() const;
  static std::optional<Validity> parse(std::string_view text);

  friend bool operator==(const Validity&, const Validity&) = default;
};

struct LogActor {
  std::size_t id = 0;  // ordinal in the spec's actor list
  ActorKind kind = ActorKind::kPedestrianAdult;
  double radius = 0.0;

  // Occluders are scenery: they block sight lines but take no part in TTC,
  // gap or collision.
  bool hazard() const { return kind != ActorKind::kParkedOccluder; }

  friend bool operator==(const LogActor&, const LogActor&) = default;
};

struct SimulationLog {
  std::string spec_id;
  std::uint64_t seed = 0;
  ArchetypeId archetype = ArchetypeId::kS4;
  ScenarioParameters parameters;
  double duration = 0.0;
  double ego_radius = 1.0;
  std::vector<LogActor> actors;
  std::optional<double> trigger_time;  // first trigger firing
  std::vector<Frame> frames;
  Termination termination = Termination::kDurationElapsed;
  Validity validity;

  friend bool operator==(const SimulationLog&, const SimulationLog&) = default;
};

struct Disc {
  Vec2 center;
  double radius = 0.0;
};

// True when no occluder disc touches the segment from -> to.
bool line_of_sight(Vec2 from, Vec2 to, std::span<const Disc> occluders);

// Tracks, per actor, the first instant of unobstructed sight.
class Perception {
 public:
  Perception(std::size_t actor_count, double delay, double range);

  // `perceivable[i]` is false for actors that have not appeared yet.
  // Writes the detected flag of every actor at time t.
  void update(double t, Vec2 ego, std::span<const AgentState> actors,
              std::span<const std::uint8_t> perceivable, std::span<const Disc> occluders,
              std::vector<std::uint8_t>& detected);

  double delay() const { return delay_; }

 private:
  std::vector<std::optional<double>> visible_since_;
  double delay_;
  double range_;
};

// Contact at the current frame, or anywhere along the linear motion from the
// previous frame (tunneling guard).
bool detect_collision(Vec2 ego_prev, Vec2 ego_now, Vec2 actor_prev, Vec2 actor_now,
                      double radii_sum);
bool detect_collision(Vec2 ego, Vec2 actor, double radii_sum);

// Throws SpecError for an invalid spec. Never throws for numeric trouble
// mid-run: the log is returned marked invalid.
SimulationLog run_scenario(const ScenarioSpec& spec, const EgoControllerConfig& config = {});

}  // namespace scenkit

#endif  // SCENKIT_SIMULATOR_HPP_
