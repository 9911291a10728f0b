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

#ifndef SCENKIT_MODEL_HPP_
#define SCENKIT_MODEL_HPP_

// Domain types shared by every stage of the toolkit: the five-parameter
// scenario space, the S1..S6 archetype catalog, actors, triggers and the
// fully resolved ScenarioSpec. All of these are plain values.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scenkit/geometry.hpp"

namespace scenkit {

inline constexpr double kGravity = 9.81;        // m/s^2
inline constexpr double kControlPeriod = 0.05;  // s, 20 Hz

// ---------------------------------------------------------------------------
// Parameter space
// ---------------------------------------------------------------------------

enum class ParameterId {
  kEgoSpeed,         // km/h
  kAgentSpeed,       // m/s
  kApproachAngle,    // deg
  kInitialDistance,  // m
  kAppearanceTime,   // s
};

inline constexpr std::array<ParameterId, 5> kAllParameters = {
    ParameterId::kEgoSpeed, ParameterId::kAgentSpeed, ParameterId::kApproachAngle,
    ParameterId::kInitialDistance, ParameterId::kAppearanceTime};

std::string_view parameter_name(ParameterId id);
std::string_view parameter_unit(ParameterId id);
std::optional<ParameterId> parameter_from_name(std::string_view name);

struct ScenarioParameters {
  double ego_speed = 35.0;         // km/h
  double agent_speed = 1.5;        // m/s
  double approach_angle = 90.0;    // deg
  double initial_distance = 30.0;  // m
  double appearance_time = 0.0;    // s

  double get(ParameterId id) const;
  void set(ParameterId id, double value);

  friend bool operator==(const ScenarioParameters&, const ScenarioParameters&) = default;
};

// Thrown by bin_index for values outside an axis range.
class RangeError : public std::out_of_range {
 public:
  RangeError(std::string axis, double value);
  const std::string& axis() const { return axis_; }

 private:
  std::string axis_;
};

struct ParameterAxis {
  ParameterId id = ParameterId::kEgoSpeed;
  std::string name;
  std::string unit;
  double range_min = 0.0;
  double range_max = 0.0;
  std::vector<double> bin_centers;
  double weight = 0.0;

  std::size_t bin_count() const { return bin_centers.size(); }
  bool contains(double value) const { return value >= range_min && value <= range_max; }

  friend bool operator==(const ParameterAxis&, const ParameterAxis&) = default;
};

// Ordinal of the nearest bin center; ties go to the lower ordinal.
std::size_t bin_index(const ParameterAxis& axis, double value);

struct ParameterDomain {
  std::vector<ParameterAxis> axes;

  const ParameterAxis* find(ParameterId id) const;
  std::size_t cell_count() const;
  // Empty when the domain is well formed.
  std::vector<std::string> problems() const;

  friend bool operator==(const ParameterDomain&, const ParameterDomain&) = default;
};

// The published five axes with 7, 5, 8, 9 and 6 bins and uniform weights.
ParameterDomain default_domain();

// Values for axes a domain does not carry: mid-range published centers.
ScenarioParameters nominal_parameters();

// ---------------------------------------------------------------------------
// Archetypes
// ---------------------------------------------------------------------------

enum class ArchetypeId { kS1, kS2, kS3, kS4, kS5, kS6 };
enum class ArchetypeCategory { kVehicleEvasive, kVruProtection };

inline constexpr std::array<ArchetypeId, 6> kAllArchetypes = {
    ArchetypeId::kS1, ArchetypeId::kS2, ArchetypeId::kS3,
    ArchetypeId::kS4, ArchetypeId::kS5, ArchetypeId::kS6};

struct Archetype {
  ArchetypeId id;
  ArchetypeCategory category;
  std::string_view code;  // "S1".."S6"
  std::string_view name;
  std::string_view description;
  std::span<const std::string_view> primary_metrics;
  bool steering_allowed;
};

const Archetype& archetype(ArchetypeId id);
std::span<const Archetype> archetype_catalog();
std::string_view archetype_code(ArchetypeId id);
std::optional<ArchetypeId> archetype_from_code(std::string_view code);

// ---------------------------------------------------------------------------
// Actors, triggers, environment
// ---------------------------------------------------------------------------

enum class ActorKind {
  kEgo,
  kLeadVehicle,
  kOncomingVehicle,
  kCutinVehicle,
  kPedestrianAdult,
  kPedestrianChild,
  kCyclist,
  kParkedOccluder,
};

std::string_view actor_kind_name(ActorKind kind);
std::optional<ActorKind> actor_kind_from_name(std::string_view name);
double default_body_radius(ActorKind kind);
bool is_vulnerable(ActorKind kind);  // pedestrians and cyclists

enum class Behavior {
  kEgoControlled,   // driven by the ego controller
  kParked,          // static scenery
  kCrossOnTrigger,  // waits, then walks/rides straight at crossing_speed
  kLaneFollow,      // keeps heading and speed; may hard-brake on trigger
  kCutIn,           // cruises, then ramps laterally toward lateral_target
  kOncomingDrift,   // cruises, then drifts laterally toward lateral_target
};

std::string_view behavior_name(Behavior behavior);
std::optional<Behavior> behavior_from_name(std::string_view name);

struct BehaviorScript {
  Behavior type = Behavior::kParked;
  double crossing_speed = 0.0;  // m/s, kCrossOnTrigger only
  double lateral_target = 0.0;  // m (y), kCutIn / kOncomingDrift only

  friend bool operator==(const BehaviorScript&, const BehaviorScript&) = default;
};

struct ActorSpec {
  ActorKind kind = ActorKind::kEgo;
  Vec2 position;
  double heading = 0.0;  // deg, counter-clockwise from +x
  double speed = 0.0;    // m/s
  double body_radius = 1.0;
  BehaviorScript behavior;

  friend bool operator==(const ActorSpec&, const ActorSpec&) = default;
};

enum class TriggerCondition { kEgoWithinDistance, kAtTime };
enum class TriggerAction { kStartCrossing, kHardBrake, kBeginLaneIntrusion, kBeginDrift };

struct TriggerEvent {
  std::size_t actor = 0;  // index into ScenarioSpec::actors
  TriggerCondition condition = TriggerCondition::kAtTime;
  double condition_value = 0.0;  // m or s
  TriggerAction action = TriggerAction::kStartCrossing;
  double action_value = 0.0;  // m/s^2 (hard_brake) or m/s (lateral rates)

  friend bool operator==(const TriggerEvent&, const TriggerEvent&) = default;
};

enum class Weather { kClear, kRain, kHeavyRain };
enum class Lighting { kDay, kDusk, kNight };

std::string_view weather_name(Weather w);
std::string_view lighting_name(Lighting l);
std::optional<Weather> weather_from_name(std::string_view name);
std::optional<Lighting> lighting_from_name(std::string_view name);
double default_friction(Weather w);
double default_detection_delay(Lighting l);

struct Environment {
  Weather weather = Weather::kClear;
  Lighting lighting = Lighting::kDay;
  double friction = 0.8;
  double extra_detection_delay = 0.0;  // s

  static Environment make(Weather weather, Lighting lighting);

  friend bool operator==(const Environment&, const Environment&) = default;
};

struct ScenarioSpec {
  std::string id;
  ArchetypeId archetype = ArchetypeId::kS4;
  ScenarioParameters parameters;
  std::vector<ActorSpec> actors;
  Environment environment;
  std::vector<TriggerEvent> triggers;
  double duration = 30.0;  // s
  std::uint64_t seed = 0;

  // Index of the single ego actor, if there is exactly one.
  std::optional<std::size_t> ego_index() const;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

struct Violation {
  std::string code;
  std::string subject;  // parameter name, actor/trigger ordinal, or empty

  std::string to_string() const;  // "code" or "code(subject)"
  friend bool operator==(const Violation&, const Violation&) = default;
};

// Every invariant violation of `spec`; empty means valid.
std::vector<Violation> validate_spec(const ScenarioSpec& spec);

// Thrown where a valid spec is a precondition.
class SpecError : public std::invalid_argument {
 public:
  explicit SpecError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace scenkit

#endif  // SCENKIT_MODEL_HPP_
