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

#include "scenkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scenkit/numfmt.hpp"

namespace scenkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_complete(const SimulationLog& log) {
  if (!log.validity.ok()) throw LogRefused(log.validity);
}

Vec2 actor_position(const SimulationLog& log, std::size_t frame, std::size_t actor) {
  return log.frames[frame].actors[actor].position;
}

struct ZoneTimes {
  std::optional<double> entry;
  std::optional<double> exit;
};

// First entry into, and first exit after that from, the disc around
// `center`, interpolated along the straight segments between frames.
template <typename PositionAt>
ZoneTimes zone_times(const SimulationLog& log, PositionAt position_at, Vec2 center,
                     double radius) {
  ZoneTimes z;
  const auto& frames = log.frames;
  if (frames.empty()) return z;
  if (norm(position_at(0) - center) <= radius) z.entry = frames[0].t;
  for (std::size_t k = 1; k < frames.size(); ++k) {
    const Vec2 a = position_at(k - 1);
    const Vec2 b = position_at(k);
    const double t0 = frames[k - 1].t;
    const double span = frames[k].t - t0;
    if (!z.entry) {
      if (const auto s = segment_disc_entry(a, b, center, radius)) z.entry = t0 + *s * span;
    }
    if (z.entry && norm(b - center) > radius) {
      if (const auto s = segment_disc_exit(a, b, center, radius)) {
        const double t = t0 + *s * span;
        if (t >= *z.entry) {
          z.exit = t;
          return z;
        }
      }
    }
  }
  return z;
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

}  // namespace

std::string_view risk_name(RiskLevel r) {
  switch (r) {
    case RiskLevel::kLow: return "Low";
    case RiskLevel::kMedium: return "Medium";
    case RiskLevel::kHigh: return "High";
  }
  return "Low";
}

std::optional<RiskLevel> risk_from_name(std::string_view name) {
  for (RiskLevel r : {RiskLevel::kLow, RiskLevel::kMedium, RiskLevel::kHigh}) {
    if (risk_name(r) == name) return r;
  }
  return std::nullopt;
}

RiskLevel classify_risk(const RiskInputs& m, const RiskThresholds& th) {
  if ((m.collision && m.impact_dv >= th.severe_impact_dv) || m.ttc_min < th.critical_ttc) {
    return RiskLevel::kHigh;
  }
  if (m.threshold_violations >= th.many_violations ||
      (m.pet && *m.pet < th.close_pet && m.d_min < th.close_d_min)) {
    return RiskLevel::kMedium;
  }
  return RiskLevel::kLow;
}

RiskInputs ScenarioMetrics::risk_inputs() const {
  return {collision, impact_dv, ttc_min, d_min, pet, threshold_violations};
}

LogRefused::LogRefused(const Validity& validity)
    : std::runtime_error("log refused: " + validity.to_string()), validity_(validity) {}

double compute_ttc(const AgentState& ego, const AgentState& actor, double radii_sum) {
  const Vec2 dp = actor.position - ego.position;
  const Vec2 dv = actor.velocity() - ego.velocity();
  const double c = dot(dp, dp) - radii_sum * radii_sum;
  if (c <= 0.0) return 0.0;
  const double a = dot(dv, dv);
  const double b = 2.0 * dot(dp, dv);
  if (a == 0.0 || b >= 0.0) return kInf;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return kInf;
  // b < 0: q > 0 and both roots q/a, c/q are positive; c/q is the smaller.
  const double q = -0.5 * (b - std::sqrt(disc));
  return std::min(c / q, q / a);
}

std::optional<double> compute_pet(const SimulationLog& log, double conflict_radius) {
  require_complete(log);
  if (log.frames.size() < 2) return std::nullopt;

  std::optional<std::size_t> obstacle;
  for (std::size_t i = 0; i < log.actors.size(); ++i) {
    if (!log.actors[i].hazard()) continue;
    if (is_vulnerable(log.actors[i].kind)) {
      obstacle = i;
      break;
    }
    if (!obstacle) obstacle = i;
  }
  if (!obstacle) return std::nullopt;
  const std::size_t j = *obstacle;

  const Frame& first = log.frames.front();
  const Vec2 ego_dir = heading_unit(first.ego.heading);
  std::optional<Vec2> conflict;
  for (std::size_t k = 0; k + 1 < log.frames.size(); ++k) {
    const Vec2 step = actor_position(log, k + 1, j) - actor_position(log, k, j);
    if (step.x == 0.0 && step.y == 0.0) continue;
    conflict = line_intersection(first.ego.position, ego_dir, actor_position(log, k, j), step);
    break;
  }
  if (!conflict) return std::nullopt;

  const ZoneTimes ego = zone_times(
      log, [&](std::size_t k) { return log.frames[k].ego.position; }, *conflict,
      conflict_radius);
  const ZoneTimes obs = zone_times(
      log, [&](std::size_t k) { return actor_position(log, k, j); }, *conflict,
      conflict_radius);
  if (!ego.entry || !ego.exit || !obs.entry) return std::nullopt;
  if (*obs.entry < *ego.entry) return std::nullopt;
  // Both inside at once: no encroachment gap at all.
  return std::max(0.0, *obs.entry - *ego.exit);
}

std::size_t count_threshold_violations(std::span<const double> ttc, double threshold) {
  std::size_t runs = 0;
  bool below = false;
  for (double v : ttc) {
    const bool now = v < threshold;
    if (now && !below) ++runs;
    below = now;
  }
  return runs;
}

std::size_t count_threshold_violations(const SimulationLog& log, double threshold) {
  require_complete(log);
  std::vector<double> ttc;
  ttc.reserve(log.frames.size());
  for (const auto& f : log.frames) ttc.push_back(f.ttc);
  return count_threshold_violations(ttc, threshold);
}

ScenarioMetrics compute_run_metrics(const SimulationLog& log) {
  require_complete(log);
  ScenarioMetrics m;
  m.ttc_min = kInf;
  m.d_min = kInf;
  const auto& frames = log.frames;
  std::optional<std::size_t> collision_frame;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const Frame& f = frames[k];
    if (std::isfinite(f.ttc)) m.ttc_min = std::min(m.ttc_min, f.ttc);
    m.max_decel = std::max(m.max_decel, -f.ego.acceleration);
    if (f.collision && !collision_frame) collision_frame = k;
    for (std::size_t i = 0; i < log.actors.size(); ++i) {
      if (!log.actors[i].hazard()) continue;
      const double radii = log.ego_radius + log.actors[i].radius;
      const Vec2 rel = f.actors[i].position - f.ego.position;
      // Closest approach along the straight motion since the previous frame.
      const double dist =
          k == 0 ? norm(rel)
                 : closest_approach(frames[k - 1].actors[i].position - frames[k - 1].ego.position,
                                    rel);
      m.d_min = std::min(m.d_min, std::max(0.0, dist - radii));
    }
  }
  m.threshold_violations = count_threshold_violations(log);
  m.collision = collision_frame.has_value();

  if (collision_frame) {
    const std::size_t k = *collision_frame;
    const Frame& f = frames[k];
    for (std::size_t i = 0; i < log.actors.size(); ++i) {
      if (!log.actors[i].hazard()) continue;
      const double radii = log.ego_radius + log.actors[i].radius;
      Vec2 dv;
      bool hit = false;
      if (k == 0) {
        hit = detect_collision(f.ego.position, f.actors[i].position, radii);
        dv = f.actors[i].velocity() - f.ego.velocity();
      } else {
        const Frame& p = frames[k - 1];
        hit = detect_collision(p.ego.position, f.ego.position, p.actors[i].position,
                               f.actors[i].position, radii);
        const double dt = f.t - p.t;
        dv = ((f.actors[i].position - p.actors[i].position) -
              (f.ego.position - p.ego.position)) * (1.0 / dt);
      }
      if (hit) {
        m.impact_dv = norm(dv);
        break;
      }
    }
  }

  if (log.trigger_time) {
    for (const auto& f : frames) {
      if (f.t >= *log.trigger_time && f.brake_cmd > 0.0) {
        m.brake_onset = f.t - *log.trigger_time;
        break;
      }
    }
  }
  m.pet = compute_pet(log);
  m.risk = classify_risk(m.risk_inputs());
  return m;
}

std::string metrics_csv_header() {
  return "scenario_id,seed,archetype,ttc_min,d_min,pet,brake_onset,max_decel,"
         "threshold_violations,collision,impact_dv,risk";
}

std::string metrics_csv_row(const SimulationLog& log, const ScenarioMetrics& m) {
  std::string row = log.spec_id;
  row += ',' + std::to_string(log.seed);
  row += ',' + std::string(archetype_code(log.archetype));
  row += ',' + format_double(m.ttc_min);
  row += ',' + format_double(m.d_min);
  row += ',' + optional_field(m.pet);
  row += ',' + optional_field(m.brake_onset);
  row += ',' + format_double(m.max_decel);
  row += ',' + std::to_string(m.threshold_violations);
  row += ',' + std::string(m.collision ? "1" : "0");
  row += ',' + format_double(m.impact_dv);
  row += ',' + std::string(risk_name(m.risk));
  return row;
}

}  // namespace scenkit
