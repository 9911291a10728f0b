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

#include "scenkit/compiler.hpp"

namespace scenkit {

namespace {

ActorSpec make_actor(ActorKind kind, Vec2 position, double heading, double speed,
                     BehaviorScript behavior) {
  return ActorSpec{kind, position, heading, speed, default_body_radius(kind), behavior};
}

}  // namespace

ScenarioSpec compile_scenario(ArchetypeId archetype_id, const ScenarioParameters& params,
                              const Environment& environment, std::uint64_t seed,
                              std::string id, double duration) {
  ScenarioSpec spec;
  spec.id = std::move(id);
  spec.archetype = archetype_id;
  spec.parameters = params;
  spec.environment = environment;
  spec.duration = duration;
  spec.seed = seed;

  const double v_ego = params.ego_speed / 3.6;
  const double v_agent = params.agent_speed;
  const double angle = params.approach_angle;
  const double gap = params.initial_distance;
  const double onset = params.appearance_time;
  const double time_to_meet = gap / v_ego;
  const double x_onset = v_ego * onset;

  const ActorSpec ego = make_actor(ActorKind::kEgo, {0.0, 0.0}, 0.0, v_ego,
                                   {Behavior::kEgoControlled, 0.0, 0.0});
  spec.actors.push_back(ego);
  const double r_ego = ego.body_radius;

  auto add_trigger = [&](TriggerAction action, double value) {
    spec.triggers.push_back({spec.actors.size() - 1, TriggerCondition::kAtTime, onset, action,
                             value});
  };

  switch (archetype_id) {
    case ArchetypeId::kS1: {
      ActorSpec lead = make_actor(ActorKind::kLeadVehicle, {}, 0.0, v_ego,
                                  {Behavior::kLaneFollow, 0.0, 0.0});
      lead.position = {gap + r_ego + lead.body_radius, 0.0};
      spec.actors.push_back(lead);
      add_trigger(TriggerAction::kHardBrake, layout::kLeadDecelPerAgentSpeed * v_agent);
      break;
    }
    case ArchetypeId::kS2: {
      const double v_cut = v_ego * angle / 100.0;
      ActorSpec cut = make_actor(ActorKind::kCutinVehicle, {}, 0.0, v_cut,
                                 {Behavior::kCutIn, 0.0, 0.0});
      cut.position = {r_ego + cut.body_radius + gap + (v_ego - v_cut) * onset,
                      layout::kLaneWidth};
      spec.actors.push_back(cut);
      add_trigger(TriggerAction::kBeginLaneIntrusion, v_agent);
      break;
    }
    case ArchetypeId::kS3: {
      const double v_onc = v_ego * angle / 100.0;
      ActorSpec onc = make_actor(ActorKind::kOncomingVehicle, {}, 180.0, v_onc,
                                 {Behavior::kOncomingDrift, 0.0, layout::kOncomingDriftY});
      const double separation = gap + v_onc * time_to_meet + r_ego + onc.body_radius;
      onc.position = {x_onset + separation + v_onc * onset, layout::kLaneWidth};
      spec.actors.push_back(onc);
      add_trigger(TriggerAction::kBeginDrift, v_agent);
      break;
    }
    case ArchetypeId::kS4:
    case ArchetypeId::kS5:
    case ArchetypeId::kS6: {
      const ActorKind kind = archetype_id == ArchetypeId::kS4   ? ActorKind::kPedestrianAdult
                             : archetype_id == ArchetypeId::kS5 ? ActorKind::kPedestrianChild
                                                                : ActorKind::kCyclist;
      // Path heading 180 - angle: 90 deg is perpendicular, smaller angles
      // meet the ego more head-on. Starts on the right. At appearance the
      // agent is initial_distance from the ego, both on course for the same
      // point.
      const double heading = 180.0 - angle;
      const Vec2 dir = heading_unit(heading);
      const Vec2 closing = dir * v_agent - Vec2{v_ego, 0.0};
      const double t_meet = gap / norm(closing);
      const Vec2 conflict{x_onset + v_ego * t_meet, 0.0};
      const Vec2 start = conflict - dir * (v_agent * t_meet);

      if (archetype_id == ArchetypeId::kS5) {
        // Row of parked vehicles along the curb, open where the child's path
        // crosses it, with one more vehicle beyond the opening.
        const double s_row = layout::kParkedRowY / dir.y;
        const Vec2 opening = conflict + dir * s_row;
        for (int k = 0; k < layout::kParkedNearCount; ++k) {
          const double x = opening.x - layout::kParkedGapHalf - layout::kParkedSpacing * k;
          spec.actors.push_back(make_actor(ActorKind::kParkedOccluder,
                                           {x, layout::kParkedRowY}, 0.0, 0.0,
                                           {Behavior::kParked, 0.0, 0.0}));
        }
        spec.actors.push_back(make_actor(ActorKind::kParkedOccluder,
                                         {opening.x + layout::kParkedGapHalf,
                                          layout::kParkedRowY},
                                         0.0, 0.0, {Behavior::kParked, 0.0, 0.0}));
      }
      spec.actors.push_back(
          make_actor(kind, start, heading, 0.0, {Behavior::kCrossOnTrigger, v_agent, 0.0}));
      add_trigger(TriggerAction::kStartCrossing, 0.0);
      break;
    }
  }
  return spec;
}

}  // namespace scenkit
