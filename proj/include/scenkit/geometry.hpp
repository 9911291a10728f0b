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

#ifndef SCENKIT_GEOMETRY_HPP_
#define SCENKIT_GEOMETRY_HPP_

#include <cmath>
#include <optional>

namespace scenkit {

inline constexpr double kPi = 3.141592653589793;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Unit vector for a heading in degrees, counter-clockwise from +x.
inline Vec2 heading_unit(double heading_deg) {
  const double r = deg_to_rad(heading_deg);
  return {std::cos(r), std::sin(r)};
}

inline bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

// Minimum of |from + s * (to - from)| over s in [0, 1]: the closest approach
// of a relative position that moves linearly across one step.
double closest_approach(Vec2 from, Vec2 to);

// Distance from `point` to the segment [a, b].
double point_segment_distance(Vec2 point, Vec2 a, Vec2 b);

// Parameter s along the segment [a, b] at which |a + s (b - a) - center|
// first drops to `radius`, if it does on [0, 1]. Returns 0 when `a` already
// lies inside the disc.
std::optional<double> segment_disc_entry(Vec2 a, Vec2 b, Vec2 center, double radius);

// Parameter s at which the segment leaves the disc (|.| rises past radius),
// given that `a` is inside and `b` outside.
std::optional<double> segment_disc_exit(Vec2 a, Vec2 b, Vec2 center, double radius);

// Intersection of the lines p + s u and q + t v; nullopt when parallel.
std::optional<Vec2> line_intersection(Vec2 p, Vec2 u, Vec2 q, Vec2 v);

}  // namespace scenkit

#endif  // SCENKIT_GEOMETRY_HPP_
