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

#include "scenkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "scenkit/numfmt.hpp"

namespace scenkit {

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

std::string_view parameter_name(ParameterId id) {
  switch (id) {
    case ParameterId::kEgoSpeed: return "ego_speed";
    case ParameterId::kAgentSpeed: return "agent_speed";
    case ParameterId::kApproachAngle: return "approach_angle";
    case ParameterId::kInitialDistance: return "initial_distance";
    case ParameterId::kAppearanceTime: return "appearance_time";
  }
  return "?";
}

std::string_view parameter_unit(ParameterId id) {
  switch (id) {
    case ParameterId::kEgoSpeed: return "km/h";
    case ParameterId::kAgentSpeed: return "m/s";
    case ParameterId::kApproachAngle: return "deg";
    case ParameterId::kInitialDistance: return "m";
    case ParameterId::kAppearanceTime: return "s";
  }
  return "?";
}

std::optional<ParameterId> parameter_from_name(std::string_view name) {
  for (ParameterId id : kAllParameters) {
    if (parameter_name(id) == name) return id;
  }
  return std::nullopt;
}

double ScenarioParameters::get(ParameterId id) const {
  switch (id) {
    case ParameterId::kEgoSpeed: return ego_speed;
    case ParameterId::kAgentSpeed: return agent_speed;
    case ParameterId::kApproachAngle: return approach_angle;
    case ParameterId::kInitialDistance: return initial_distance;
    case ParameterId::kAppearanceTime: return appearance_time;
  }
  return 0.0;
}

void ScenarioParameters::set(ParameterId id, double value) {
  switch (id) {
    case ParameterId::kEgoSpeed: ego_speed = value; break;
    case ParameterId::kAgentSpeed: agent_speed = value; break;
    case ParameterId::kApproachAngle: approach_angle = value; break;
    case ParameterId::kInitialDistance: initial_distance = value; break;
    case ParameterId::kAppearanceTime: appearance_time = value; break;
  }
}

RangeError::RangeError(std::string axis, double value)
    : std::out_of_range("value " + format_double(value) + " outside range of axis '" +
                        axis + "'"),
      axis_(std::move(axis)) {}

std::size_t bin_index(const ParameterAxis& axis, double value) {
  if (!(value >= axis.range_min && value <= axis.range_max) || axis.bin_centers.empty()) {
    throw RangeError(axis.name, value);
  }
  std::size_t best = 0;
  double best_dist = std::abs(value - axis.bin_centers[0]);
  for (std::size_t k = 1; k < axis.bin_centers.size(); ++k) {
    const double dist = std::abs(value - axis.bin_centers[k]);
    if (dist < best_dist) {  // strict: equal distance keeps the lower ordinal
      best = k;
      best_dist = dist;
    }
  }
  return best;
}

const ParameterAxis* ParameterDomain::find(ParameterId id) const {
  for (const auto& axis : axes) {
    if (axis.id == id) return &axis;
  }
  return nullptr;
}

std::size_t ParameterDomain::cell_count() const {
  if (axes.empty()) return 0;
  std::size_t n = 1;
  for (const auto& axis : axes) n *= axis.bin_count();
  return n;
}

std::vector<std::string> ParameterDomain::problems() const {
  std::vector<std::string> out;
  std::set<std::string> names;
  std::set<ParameterId> ids;
  double weight_sum = 0.0;
  for (const auto& axis : axes) {
    if (!names.insert(axis.name).second) out.push_back("duplicate axis name: " + axis.name);
    if (!ids.insert(axis.id).second) out.push_back("duplicate axis parameter: " + axis.name);
    if (!(axis.range_min <= axis.range_max)) out.push_back("empty range: " + axis.name);
    if (axis.bin_centers.empty()) out.push_back("no bins: " + axis.name);
    for (std::size_t k = 0; k < axis.bin_centers.size(); ++k) {
      const double c = axis.bin_centers[k];
      if (!axis.contains(c)) out.push_back("bin center outside range: " + axis.name);
      if (k > 0 && !(axis.bin_centers[k - 1] < c)) {
        out.push_back("bin centers not strictly increasing: " + axis.name);
      }
    }
    if (!(axis.weight >= 0.0 && axis.weight <= 1.0)) out.push_back("bad weight: " + axis.name);
    weight_sum += axis.weight;
  }
  if (!axes.empty() && std::abs(weight_sum - 1.0) > 1e-9) {
    out.push_back("weights sum to " + format_double(weight_sum));
  }
  return out;
}

namespace {

ParameterAxis make_axis(ParameterId id, double lo, double hi, std::vector<double> centers) {
  ParameterAxis axis;
  axis.id = id;
  axis.name = std::string(parameter_name(id));
  axis.unit = std::string(parameter_unit(id));
  axis.range_min = lo;
  axis.range_max = hi;
  axis.bin_centers = std::move(centers);
  axis.weight = 0.2;
  return axis;
}

}  // namespace

ParameterDomain default_domain() {
  ParameterDomain d;
  d.axes.push_back(make_axis(ParameterId::kEgoSpeed, 20, 50, {20, 25, 30, 35, 40, 45, 50}));
  d.axes.push_back(make_axis(ParameterId::kAgentSpeed, 0.5, 2.5, {0.5, 1.0, 1.5, 2.0, 2.5}));
  d.axes.push_back(
      make_axis(ParameterId::kApproachAngle, 30, 100, {30, 40, 50, 60, 70, 80, 90, 100}));
  d.axes.push_back(make_axis(ParameterId::kInitialDistance, 10, 50,
                             {10, 15, 20, 25, 30, 35, 40, 45, 50}));
  d.axes.push_back(make_axis(ParameterId::kAppearanceTime, 0, 5, {0, 1, 2, 3, 4, 5}));
  return d;
}

ScenarioParameters nominal_parameters() { return ScenarioParameters{}; }

// ---------------------------------------------------------------------------
// Archetype catalog
// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kS1Metrics[] = {"ttc", "d_min", "brake_onset", "velocity",
                                           "collision"};
constexpr std::string_view kS2Metrics[] = {"ttc", "steering_onset", "lateral_acceleration",
                                           "impact_dv"};
constexpr std::string_view kS3Metrics[] = {"ttc", "lateral_offset", "steering_rate",
                                           "impact_dv"};
constexpr std::string_view kS4Metrics[] = {"ttc", "d_min", "brake_onset", "collision"};
constexpr std::string_view kS5Metrics[] = {"detection_delay", "ttc", "velocity", "collision"};
constexpr std::string_view kS6Metrics[] = {"ttc", "steering", "collision"};

const Archetype kCatalog[] = {
    {ArchetypeId::kS1, ArchetypeCategory::kVehicleEvasive, "S1",
     "Lead Vehicle Sudden Stop (LVSS)",
     "lead vehicle in the ego lane brakes hard at the trigger", kS1Metrics, false},
    {ArchetypeId::kS2, ArchetypeCategory::kVehicleEvasive, "S2",
     "Cut-in (Aggressive Lane Intrusion)",
     "adjacent-lane vehicle ramps into the ego lane ahead of the ego", kS2Metrics, true},
    {ArchetypeId::kS3, ArchetypeCategory::kVehicleEvasive, "S3",
     "Oncoming Vehicle Encroachment",
     "opposing-lane vehicle drifts across the centre line", kS3Metrics, true},
    {ArchetypeId::kS4, ArchetypeCategory::kVruProtection, "S4", "Pedestrian Crossing (Adult)",
     "adult pedestrian crosses the ego path from the right", kS4Metrics, false},
    {ArchetypeId::kS5, ArchetypeCategory::kVruProtection, "S5",
     "Pedestrian Running Child Emerge",
     "child runs into the road from behind parked vehicles", kS5Metrics, false},
    {ArchetypeId::kS6, ArchetypeCategory::kVruProtection, "S6", "Cyclist Crossing from the Right",
     "cyclist crosses the ego path from the right", kS6Metrics, true},
};

}  // namespace

const Archetype& archetype(ArchetypeId id) { return kCatalog[static_cast<int>(id)]; }

std::span<const Archetype> archetype_catalog() { return kCatalog; }

std::string_view archetype_code(ArchetypeId id) { return archetype(id).code; }

std::optional<ArchetypeId> archetype_from_code(std::string_view code) {
  for (const auto& a : kCatalog) {
    if (a.code == code) return a.id;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Actors and environment
// ---------------------------------------------------------------------------

namespace {

struct KindInfo {
  ActorKind kind;
  std::string_view name;
  double radius;
};

constexpr KindInfo kKinds[] = {
    {ActorKind::kEgo, "ego", 1.0},
    {ActorKind::kLeadVehicle, "lead_vehicle", 1.0},
    {ActorKind::kOncomingVehicle, "oncoming_vehicle", 1.0},
    {ActorKind::kCutinVehicle, "cutin_vehicle", 1.0},
    {ActorKind::kPedestrianAdult, "pedestrian_adult", 0.3},
    {ActorKind::kPedestrianChild, "pedestrian_child", 0.3},
    {ActorKind::kCyclist, "cyclist", 0.5},
    {ActorKind::kParkedOccluder, "parked_occluder", 1.0},
};

constexpr std::pair<Behavior, std::string_view> kBehaviors[] = {
    {Behavior::kEgoControlled, "ego"},     {Behavior::kParked, "parked"},
    {Behavior::kCrossOnTrigger, "cross"},  {Behavior::kLaneFollow, "lane_follow"},
    {Behavior::kCutIn, "cut_in"},          {Behavior::kOncomingDrift, "oncoming"},
};

}  // namespace

std::string_view actor_kind_name(ActorKind kind) {
  return kKinds[static_cast<int>(kind)].name;
}

std::optional<ActorKind> actor_kind_from_name(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

double default_body_radius(ActorKind kind) { return kKinds[static_cast<int>(kind)].radius; }

bool is_vulnerable(ActorKind kind) {
  return kind == ActorKind::kPedestrianAdult || kind == ActorKind::kPedestrianChild ||
         kind == ActorKind::kCyclist;
}

std::string_view behavior_name(Behavior behavior) {
  for (const auto& [b, name] : kBehaviors) {
    if (b == behavior) return name;
  }
  return "?";
}

std::optional<Behavior> behavior_from_name(std::string_view name) {
  for (const auto& [b, n] : kBehaviors) {
    if (n == name) return b;
  }
  return std::nullopt;
}

std::string_view weather_name(Weather w) {
  switch (w) {
    case Weather::kClear: return "clear";
    case Weather::kRain: return "rain";
    case Weather::kHeavyRain: return "heavy_rain";
  }
  return "?";
}

std::string_view lighting_name(Lighting l) {
  switch (l) {
    case Lighting::kDay: return "day";
    case Lighting::kDusk: return "dusk";
    case Lighting::kNight: return "night";
  }
  return "?";
}

std::optional<Weather> weather_from_name(std::string_view name) {
  for (Weather w : {Weather::kClear, Weather::kRain, Weather::kHeavyRain}) {
    if (weather_name(w) == name) return w;
  }
  return std::nullopt;
}

std::optional<Lighting> lighting_from_name(std::string_view name) {
  for (Lighting l : {Lighting::kDay, Lighting::kDusk, Lighting::kNight}) {
    if (lighting_name(l) == name) return l;
  }
  return std::nullopt;
}

double default_friction(Weather w) {
  switch (w) {
    case Weather::kClear: return 0.8;
    case Weather::kRain: return 0.6;
    case Weather::kHeavyRain: return 0.45;
  }
  return 0.8;
}

double default_detection_delay(Lighting l) {
  switch (l) {
    case Lighting::kDay: return 0.0;
    case Lighting::kDusk: return 0.2;
    case Lighting::kNight: return 0.4;
  }
  return 0.0;
}

Environment Environment::make(Weather weather, Lighting lighting) {
  return Environment{weather, lighting, default_friction(weather),
                     default_detection_delay(lighting)};
}

std::optional<std::size_t> ScenarioSpec::ego_index() const {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < actors.size(); ++i) {
    if (actors[i].kind == ActorKind::kEgo) {
      if (found) return std::nullopt;
      found = i;
    }
  }
  return found;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

std::string Violation::to_string() const {
  return subject.empty() ? code : code + "(" + subject + ")";
}

SpecError::SpecError(std::vector<Violation> violations)
    : std::invalid_argument([&] {
        std::string msg = "invalid scenario spec:";
        for (const auto& v : violations) msg += " " + v.to_string();
        return msg;
      }()),
      violations_(std::move(violations)) {}

namespace {

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  });
}

Behavior expected_behavior(ActorKind kind) {
  switch (kind) {
    case ActorKind::kEgo: return Behavior::kEgoControlled;
    case ActorKind::kParkedOccluder: return Behavior::kParked;
    case ActorKind::kLeadVehicle: return Behavior::kLaneFollow;
    case ActorKind::kCutinVehicle: return Behavior::kCutIn;
    case ActorKind::kOncomingVehicle: return Behavior::kOncomingDrift;
    case ActorKind::kPedestrianAdult:
    case ActorKind::kPedestrianChild:
    case ActorKind::kCyclist: return Behavior::kCrossOnTrigger;
  }
  return Behavior::kParked;
}

std::optional<Behavior> behavior_for_action(TriggerAction action) {
  switch (action) {
    case TriggerAction::kStartCrossing: return Behavior::kCrossOnTrigger;
    case TriggerAction::kHardBrake: return Behavior::kLaneFollow;
    case TriggerAction::kBeginLaneIntrusion: return Behavior::kCutIn;
    case TriggerAction::kBeginDrift: return Behavior::kOncomingDrift;
  }
  return std::nullopt;
}

}  // namespace

std::vector<Violation> validate_spec(const ScenarioSpec& spec) {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string subject = {}) {
    out.push_back({std::move(code), std::move(subject)});
  };

  if (!valid_id(spec.id)) add("invalid_id");
  if (!(std::isfinite(spec.duration) && spec.duration > 0.0)) add("invalid_duration");

  const ParameterDomain domain = default_domain();
  for (const auto& axis : domain.axes) {
    const double v = spec.parameters.get(axis.id);
    if (!axis.contains(v)) add("parameter_out_of_range", axis.name);
  }

  const Environment& env = spec.environment;
  if (!(env.friction > 0.0 && env.friction <= 1.0)) add("invalid_friction");
  if (!(std::isfinite(env.extra_detection_delay) && env.extra_detection_delay >= 0.0)) {
    add("invalid_detection_delay");
  }

  std::size_t ego_count = 0;
  for (std::size_t i = 0; i < spec.actors.size(); ++i) {
    const ActorSpec& a = spec.actors[i];
    const std::string idx = std::to_string(i);
    if (a.kind == ActorKind::kEgo) ++ego_count;
    if (!(is_finite(a.position) && std::isfinite(a.heading) && std::isfinite(a.speed))) {
      add("non_finite_actor", idx);
    }
    if (!(a.body_radius > 0.0 && std::isfinite(a.body_radius))) add("invalid_radius", idx);
    if (a.speed < 0.0) add("negative_speed", idx);
    if (a.behavior.type != expected_behavior(a.kind)) add("behavior_mismatch", idx);
    if (a.behavior.type == Behavior::kCrossOnTrigger &&
        !(a.behavior.crossing_speed > 0.0 && std::isfinite(a.behavior.crossing_speed))) {
      add("invalid_behavior", idx);
    }
    if (!std::isfinite(a.behavior.lateral_target)) add("invalid_behavior", idx);
  }
  if (ego_count == 0) add("missing_ego");
  if (ego_count > 1) add("multiple_ego");

  if (const auto ego = spec.ego_index()) {
    const ActorSpec& e = spec.actors[*ego];
    if (std::abs(e.speed - spec.parameters.ego_speed / 3.6) > 1e-9) add("ego_speed_mismatch");
    for (std::size_t i = 0; i < spec.actors.size(); ++i) {
      const ActorSpec& a = spec.actors[i];
      if (i == *ego || a.kind == ActorKind::kParkedOccluder) continue;
      if (norm(a.position - e.position) <= a.body_radius + e.body_radius) {
        add("initial_overlap", std::to_string(i));
      }
    }
  }

  for (std::size_t k = 0; k < spec.triggers.size(); ++k) {
    const TriggerEvent& t = spec.triggers[k];
    const std::string idx = std::to_string(k);
    if (t.actor >= spec.actors.size()) {
      add("trigger_actor_out_of_range", idx);
      continue;
    }
    const bool cond_ok = t.condition == TriggerCondition::kAtTime
                             ? (std::isfinite(t.condition_value) && t.condition_value >= 0.0)
                             : (std::isfinite(t.condition_value) && t.condition_value > 0.0);
    const bool action_ok = t.action == TriggerAction::kStartCrossing ||
                           (std::isfinite(t.action_value) && t.action_value > 0.0);
    if (!cond_ok || !action_ok) add("invalid_trigger_value", idx);
    if (behavior_for_action(t.action) != spec.actors[t.actor].behavior.type) {
      add("trigger_action_mismatch", idx);
    }
  }

  auto count_kind = [&](ActorKind kind) {
    return std::count_if(spec.actors.begin(), spec.actors.end(),
                         [&](const ActorSpec& a) { return a.kind == kind; });
  };
  switch (spec.archetype) {
    case ArchetypeId::kS1:
      if (count_kind(ActorKind::kLeadVehicle) == 0) add("missing_lead_vehicle");
      break;
    case ArchetypeId::kS2:
      if (count_kind(ActorKind::kCutinVehicle) == 0) add("missing_cutin_vehicle");
      break;
    case ArchetypeId::kS3:
      if (count_kind(ActorKind::kOncomingVehicle) == 0) add("missing_oncoming_vehicle");
      break;
    case ArchetypeId::kS4:
      if (count_kind(ActorKind::kPedestrianAdult) == 0) add("missing_pedestrian");
      break;
    case ArchetypeId::kS5:
      if (count_kind(ActorKind::kPedestrianChild) == 0) add("missing_child");
      if (count_kind(ActorKind::kParkedOccluder) == 0) add("missing_occluder");
      break;
    case ArchetypeId::kS6:
      if (count_kind(ActorKind::kCyclist) == 0) add("missing_cyclist");
      break;
  }
  return out;
}

}  // namespace scenkit
