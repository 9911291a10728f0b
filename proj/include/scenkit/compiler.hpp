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

#ifndef SCENKIT_COMPILER_HPP_
#define SCENKIT_COMPILER_HPP_

#include <cstdint>
#include <string>

#include "scenkit/model.hpp"

namespace scenkit {

// Fixed road layout shared by every archetype.
namespace layout {
inline constexpr double kLaneWidth = 3.5;       // m; adjacent lane centre at +kLaneWidth
inline constexpr double kParkedRowY = -3.0;     // m; curb-side parked row (S5)
inline constexpr double kParkedSpacing = 2.0;   // m between occluder centres
inline constexpr int kParkedNearCount = 8;      // occluders on the ego side of the gap
inline constexpr double kParkedGapHalf = 1.6;   // m from the child path to the first centre
inline constexpr double kOncomingDriftY = 1.0;  // m; S3 drift stops this far left of the ego lane centre
inline constexpr double kLeadDecelPerAgentSpeed = 3.2;  // S1: decel = 3.2 * agent_speed
inline constexpr double kDefaultDuration = 30.0;        // s
}  // namespace layout

// Deterministic layout of one archetype instance. The hazard acts at
// t = appearance_time. For the vehicle archetypes initial_distance is the
// gap ahead of the ego at that moment; for crossings it is the ego-to-actor
// distance, with both on course for the same point. Formulas are in
// docs/scenario-format.md.
ScenarioSpec compile_scenario(ArchetypeId archetype, const ScenarioParameters& params,
                              const Environment& environment, std::uint64_t seed,
                              std::string id, double duration = layout::kDefaultDuration);

}  // namespace scenkit

#endif  // SCENKIT_COMPILER_HPP_
