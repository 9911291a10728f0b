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

#include "scenkit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scenkit/metrics.hpp"

namespace scenkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTimeEps = 1e-9;
constexpr double kCutInRamp = 1.5;        // s to reach the full lateral rate
constexpr double kStoppedSpeed = 0.1;     // m/s
constexpr double kMinSteerSpeed = 0.5;    // m/s; below this heading is frozen

enum class BrakeLevel { kNone, kComfort, kEmergency };

struct ActorRuntime {
  ActorSpec spec;
  AgentState state;
  Vec2 base_dir;
  bool hazard = true;
  bool has_trigger = false;
  bool triggered = false;
  double fired_at = 0.0;
  double action_value = 0.0;
};

bool finite_state(const AgentState& s) {
  return is_finite(s.position) && std::isfinite(s.heading) && std::isfinite(s.speed) &&
         std::isfinite(s.acceleration) && std::isfinite(s.lateral_acceleration);
}

double sign_or(double v, double fallback) { return v > 0.0 ? 1.0 : v < 0.0 ? -1.0 : fallback; }

void advance_actor(ActorRuntime& a, double t_next, double dt) {
  AgentState& s = a.state;
  Vec2 vel{0.0, 0.0};
  double accel = 0.0;
  switch (a.spec.behavior.type) {
    case Behavior::kEgoControlled:
    case Behavior::kParked:
      return;
    case Behavior::kCrossOnTrigger:
      if (a.triggered) vel = a.base_dir * a.spec.behavior.crossing_speed;
      break;
    case Behavior::kLaneFollow: {
      double v = s.speed;
      if (a.triggered) {
        v = std::max(0.0, v - a.action_value * dt);
        accel = (v - s.speed) / dt;
      }
      vel = a.base_dir * v;
      break;
    }
    case Behavior::kCutIn:
    case Behavior::kOncomingDrift: {
      vel = a.base_dir * a.spec.speed;
      if (a.triggered) {
        double rate = a.action_value;
        if (a.spec.behavior.type == Behavior::kCutIn) {
          rate *= std::min(1.0, (t_next - a.fired_at) / kCutInRamp);
        }
        const double dy = a.spec.behavior.lateral_target - s.position.y;
        const double step = std::min(std::abs(dy), rate * dt);
        vel.y += sign_or(dy, 0.0) * step / dt;
      }
      break;
    }
  }
  s.position = s.position + vel * dt;
  s.speed = norm(vel);
  s.acceleration = accel;
  if (s.speed > 0.0) s.heading = rad_to_deg(std::atan2(vel.y, vel.x));
}

// Whether full braking from now on keeps the ego clear of `hazard`, assuming
// the hazard holds its velocity. Checked step by step until the ego has
// stopped and the hazard no longer closes in.
bool braking_avoids(const AgentState& ego, const AgentState& hazard, double radii_sum,
                    double mu_g, double dt) {
  constexpr double kHorizon = 10.0;  // s
  Vec2 pe = ego.position;
  Vec2 ph = hazard.position;
  const Vec2 ue = heading_unit(ego.heading);
  const Vec2 vh = hazard.velocity();
  double v = ego.speed;
  for (double t = 0.0; t < kHorizon; t += dt) {
    const double v_next = std::max(0.0, v - mu_g * dt);
    const Vec2 pe_next = pe + ue * (v_next * dt);
    const Vec2 ph_next = ph + vh * dt;
    if (detect_collision(pe, pe_next, ph, ph_next, radii_sum)) return false;
    pe = pe_next;
    ph = ph_next;
    v = v_next;
    if (v == 0.0 && dot(ph - pe, vh) >= 0.0) return true;
  }
  return true;
}

}  // namespace

std::vector<std::string> EgoControllerConfig::problems() const {
  std::vector<std::string> out;
  if (!(emergency_ttc > 0.0 && emergency_ttc < comfort_ttc)) {
    out.emplace_back("emergency_ttc must be positive and below comfort_ttc");
  }
  if (!(comfort_decel > 0.0)) out.emplace_back("comfort_decel must be positive");
  if (!(perception_range > 0.0)) out.emplace_back("perception_range must be positive");
  if (!(base_detection_delay >= 0.0)) out.emplace_back("base_detection_delay must be >= 0");
  if (!(lateral_limit > 0.0)) out.emplace_back("lateral_limit must be positive");
  if (!(max_evade_heading > 0.0 && max_evade_heading < 90.0)) {
    out.emplace_back("max_evade_heading must be in (0, 90)");
  }
  if (control_period != kControlPeriod) out.emplace_back("control_period must be 0.05 s");
  return out;
}

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::kDurationElapsed: return "duration_elapsed";
    case Termination::kCollision: return "collision";
    case Termination::kEgoStoppedClear: return "ego_stopped_clear";
  }
  return "duration_elapsed";
}

std::optional<Termination> termination_from_name(std::string_view name) {
  for (Termination t : {Termination::kDurationElapsed, Termination::kCollision,
                        Termination::kEgoStoppedClear}) {
    if (termination_name(t) == name) return t;
  }
  return std::nullopt;
}

std::string Validity::to_string() const {
  switch (kind) {
    case ValidityKind::kComplete: return "complete";
    case ValidityKind::kTruncated:
      return reason.empty() || reason == "truncated" ? "truncated" : "truncated(" + reason + ")";
    case ValidityKind::kInvalid: return "invalid(" + reason + ")";
  }
  return "complete";
}

std::optional<Validity> Validity::parse(std::string_view text) {
  if (text == "complete") return complete();
  if (text == "truncated") return truncated("truncated");
  for (auto [prefix, k] : {std::pair{std::string_view("invalid("), ValidityKind::kInvalid},
                           std::pair{std::string_view("truncated("), ValidityKind::kTruncated}}) {
    if (text.size() > prefix.size() + 1 && text.starts_with(prefix) && text.ends_with(')')) {
      return Validity{k, std::string(text.substr(prefix.size(), text.size() - prefix.size() - 1))};
    }
  }
  return std::nullopt;
}

bool line_of_sight(Vec2 from, Vec2 to, std::span<const Disc> occluders) {
  for (const Disc& d : occluders) {
    if (point_segment_distance(d.center, from, to) <= d.radius) return false;
  }
  return true;
}

Perception::Perception(std::size_t actor_count, double delay, double range)
    : visible_since_(actor_count), delay_(delay), range_(range) {}

void Perception::update(double t, Vec2 ego, std::span<const AgentState> actors,
                        std::span<const std::uint8_t> perceivable,
                        std::span<const Disc> occluders, std::vector<std::uint8_t>& detected) {
  detected.assign(actors.size(), 0);
  for (std::size_t i = 0; i < actors.size(); ++i) {
    if (!perceivable[i]) continue;
    const Vec2 p = actors[i].position;
    const bool clear = line_of_sight(ego, p, occluders);
    if (clear && norm(p - ego) <= range_ && !visible_since_[i]) visible_since_[i] = t;
    const bool qualified = visible_since_[i] && t - *visible_since_[i] >= delay_ - kTimeEps;
    detected[i] = qualified && clear ? 1 : 0;
  }
}

bool detect_collision(Vec2 ego, Vec2 actor, double radii_sum) {
  return norm(actor - ego) <= radii_sum;
}

bool detect_collision(Vec2 ego_prev, Vec2 ego_now, Vec2 actor_prev, Vec2 actor_now,
                      double radii_sum) {
  if (detect_collision(ego_now, actor_now, radii_sum)) return true;
  return closest_approach(actor_prev - ego_prev, actor_now - ego_now) <= radii_sum;
}

SimulationLog run_scenario(const ScenarioSpec& spec, const EgoControllerConfig& config) {
  if (auto v = validate_spec(spec); !v.empty()) throw SpecError(std::move(v));

  const double dt = config.control_period;
  const double mu_g = spec.environment.friction * kGravity;
  const bool steering_allowed = archetype(spec.archetype).steering_allowed;
  const std::size_t ego_idx = *spec.ego_index();
  const ActorSpec& ego_spec = spec.actors[ego_idx];

  SimulationLog log;
  log.spec_id = spec.id;
  log.seed = spec.seed;
  log.archetype = spec.archetype;
  log.parameters = spec.parameters;
  log.duration = spec.duration;
  log.ego_radius = ego_spec.body_radius;

  std::vector<ActorRuntime> actors;
  std::vector<std::size_t> runtime_of(spec.actors.size(), 0);
  std::vector<Disc> occluders;
  for (std::size_t i = 0; i < spec.actors.size(); ++i) {
    if (i == ego_idx) continue;
    const ActorSpec& a = spec.actors[i];
    ActorRuntime r;
    r.spec = a;
    r.state = {a.position, a.heading, a.speed, 0.0, 0.0};
    r.base_dir = heading_unit(a.heading);
    r.hazard = a.kind != ActorKind::kParkedOccluder;
    if (!r.hazard) occluders.push_back({a.position, a.body_radius});
    runtime_of[i] = actors.size();
    actors.push_back(r);
    log.actors.push_back({i, a.kind, a.body_radius});
  }
  std::vector<std::uint8_t> trigger_fired(spec.triggers.size(), 0);
  for (const auto& t : spec.triggers) actors[runtime_of[t.actor]].has_trigger = true;

  AgentState ego{ego_spec.position, ego_spec.heading, ego_spec.speed, 0.0, 0.0};
  Perception perception(actors.size(),
                        config.base_detection_delay + spec.environment.extra_detection_delay,
                        config.perception_range);

  BrakeLevel level = BrakeLevel::kNone;
  bool evading = false;
  double evade_y = 0.0;  // lateral target, relative to the ego's starting lane
  const Vec2 lane_left = heading_unit(ego_spec.heading + 90.0);

  const auto steps = static_cast<std::size_t>(std::floor(spec.duration / dt + kTimeEps));
  std::vector<AgentState> states(actors.size());
  std::vector<std::uint8_t> perceivable(actors.size());
  Vec2 ego_prev = ego.position;
  std::vector<Vec2> actor_prev(actors.size());
  for (std::size_t i = 0; i < actors.size(); ++i) actor_prev[i] = actors[i].state.position;

  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;

    // Triggers fire on the frame their condition first holds; the actor's
    // script reacts from the next step.
    for (std::size_t j = 0; j < spec.triggers.size(); ++j) {
      if (trigger_fired[j]) continue;
      const TriggerEvent& te = spec.triggers[j];
      ActorRuntime& a = actors[runtime_of[te.actor]];
      const bool holds = te.condition == TriggerCondition::kAtTime
                             ? t >= te.condition_value - kTimeEps
                             : norm(a.state.position - ego.position) <= te.condition_value;
      if (!holds) continue;
      trigger_fired[j] = 1;
      a.triggered = true;
      a.fired_at = t;
      a.action_value = te.action_value;
      if (!log.trigger_time) log.trigger_time = t;
    }

    for (std::size_t i = 0; i < actors.size(); ++i) {
      states[i] = actors[i].state;
      const bool waiting =
          actors[i].spec.behavior.type == Behavior::kCrossOnTrigger && !actors[i].triggered;
      perceivable[i] = actors[i].hazard && !waiting ? 1 : 0;
    }
    Frame frame;
    frame.t = t;
    perception.update(t, ego.position, states, perceivable, occluders, frame.detected);

    // Ground truth over every hazard, and the controller's view over the
    // detected ones.
    double ttc_all = kInf;
    double ttc_seen = kInf;
    bool approaching_seen = false;
    std::size_t critical = actors.size();
    double gap = kInf;
    bool collided = false;
    const Vec2 ego_vel = ego.velocity();
    for (std::size_t i = 0; i < actors.size(); ++i) {
      if (!actors[i].hazard) continue;
      const double radii = log.ego_radius + actors[i].spec.body_radius;
      const double ttc = compute_ttc(ego, states[i], radii);
      ttc_all = std::min(ttc_all, ttc);
      gap = std::min(gap, std::max(0.0, norm(states[i].position - ego.position) - radii));
      if (frame.detected[i] &&
          dot(states[i].position - ego.position, states[i].velocity() - ego_vel) < 0.0) {
        approaching_seen = true;
      }
      if (frame.detected[i] && ttc < ttc_seen) {
        ttc_seen = ttc;
        critical = i;
      }
      const bool hit = k == 0 ? detect_collision(ego.position, states[i].position, radii)
                              : detect_collision(ego_prev, ego.position, actor_prev[i],
                                                 states[i].position, radii);
      collided = collided || hit;
    }

    // Decision: graded braking with hysteresis, then optional evasion.
    BrakeLevel wanted = ttc_seen < config.emergency_ttc ? BrakeLevel::kEmergency
                        : ttc_seen < config.comfort_ttc ? BrakeLevel::kComfort
                                                        : BrakeLevel::kNone;
    // Escalate at once; once braking, hold until every detected hazard is
    // off a collision course and moving away.
    if (wanted >= level || (ttc_seen == kInf && !approaching_seen)) level = wanted;
    double brake = 0.0;
    if (level == BrakeLevel::kComfort) brake = std::min(1.0, config.comfort_decel / mu_g);
    if (level == BrakeLevel::kEmergency) brake = 1.0;

    if (!evading && steering_allowed && level != BrakeLevel::kNone &&
        critical < actors.size() &&
        !braking_avoids(ego, states[critical],
                        log.ego_radius + actors[critical].spec.body_radius, mu_g, dt)) {
      // Evade behind a crossing road user, away from a vehicle.
      const AgentState& h = states[critical];
      const double offset = dot(h.position - ego.position, lane_left);
      const double side = is_vulnerable(actors[critical].spec.kind)
                              ? -sign_or(dot(h.velocity(), lane_left), sign_or(offset, 1.0))
                              : -sign_or(offset, 1.0);
      evading = true;
      evade_y = side * config.evade_offset;
    }
    double a_lat = 0.0;
    if (evading) {
      const double y = dot(ego.position - ego_spec.position, lane_left);
      const double vy = ego.speed * std::sin(deg_to_rad(ego.heading - ego_spec.heading));
      a_lat = std::clamp(config.steer_kp * (evade_y - y) - config.steer_kd * vy,
                         -config.lateral_limit, config.lateral_limit);
    }

    ego.acceleration = ego.speed > 0.0 ? -brake * mu_g : 0.0;
    ego.lateral_acceleration = a_lat;
    frame.ego = ego;
    frame.brake_cmd = brake;
    frame.steer_cmd = a_lat / config.lateral_limit;
    frame.actors = states;
    frame.ttc = ttc_all;
    frame.gap = gap;
    frame.collision = collided;

    bool finite = finite_state(ego) && std::isfinite(frame.brake_cmd) &&
                  std::isfinite(frame.steer_cmd) && !std::isnan(ttc_all) && !std::isnan(gap);
    for (const auto& s : states) finite = finite && finite_state(s);
    if (!finite) {
      log.validity = Validity::invalid("non_finite_state");
      return log;
    }
    log.frames.push_back(std::move(frame));

    if (collided) {
      log.termination = Termination::kCollision;
      return log;
    }
    if (k >= steps) {
      log.termination = Termination::kDurationElapsed;
      return log;
    }
    if (ego.speed < kStoppedSpeed) {
      bool clear = true;
      for (std::size_t i = 0; i < actors.size() && clear; ++i) {
        if (!actors[i].hazard) continue;
        if (actors[i].has_trigger && !actors[i].triggered) clear = false;
        const double radii = log.ego_radius + actors[i].spec.body_radius;
        const Vec2 dp = states[i].position - ego.position;
        const Vec2 dv = states[i].velocity() - ego_vel;
        if (compute_ttc(ego, states[i], radii) != kInf || dot(dp, dv) < 0.0) clear = false;
      }
      if (clear) {
        log.termination = Termination::kEgoStoppedClear;
        return log;
      }
    }

    // Actuation and integration to t + dt.
    ego_prev = ego.position;
    for (std::size_t i = 0; i < actors.size(); ++i) actor_prev[i] = actors[i].state.position;
    const double v_next = std::max(0.0, ego.speed + ego.acceleration * dt);
    if (evading && ego.speed > kMinSteerSpeed) {
      const double omega = a_lat / ego.speed;  // rad/s
      ego.heading = std::clamp(ego.heading + rad_to_deg(omega) * dt,
                               ego_spec.heading - config.max_evade_heading,
                               ego_spec.heading + config.max_evade_heading);
    }
    ego.speed = v_next;
    ego.position = ego.position + heading_unit(ego.heading) * (v_next * dt);
    const double t_next = static_cast<double>(k + 1) * dt;
    for (auto& a : actors) advance_actor(a, t_next, dt);
  }
}

}  // namespace scenkit
