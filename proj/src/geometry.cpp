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

#include "scenkit/geometry.hpp"

#include <algorithm>

namespace scenkit {

double closest_approach(Vec2 from, Vec2 to) {
  const Vec2 d = to - from;
  const double dd = dot(d, d);
  if (dd == 0.0) return norm(from);
  const double s = std::clamp(-dot(from, d) / dd, 0.0, 1.0);
  return norm(from + d * s);
}

double point_segment_distance(Vec2 point, Vec2 a, Vec2 b) {
  return closest_approach(a - point, b - point);
}

namespace {

// Roots of |a + s d - c|^2 = r^2 in s, ascending; nullopt if none.
std::optional<std::pair<double, double>> circle_roots(Vec2 a, Vec2 b, Vec2 center,
                                                     double radius) {
  const Vec2 d = b - a;
  const Vec2 f = a - center;
  const double qa = dot(d, d);
  if (qa == 0.0) return std::nullopt;
  const double qb = 2.0 * dot(f, d);
  const double qc = dot(f, f) - radius * radius;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  return std::pair{(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)};
}

}  // namespace

std::optional<double> segment_disc_entry(Vec2 a, Vec2 b, Vec2 center, double radius) {
  if (norm(a - center) <= radius) return 0.0;
  const auto roots = circle_roots(a, b, center, radius);
  if (!roots) return std::nullopt;
  const double s = roots->first;
  if (s < 0.0 || s > 1.0) return std::nullopt;
  return s;
}

std::optional<double> segment_disc_exit(Vec2 a, Vec2 b, Vec2 center, double radius) {
  const auto roots = circle_roots(a, b, center, radius);
  if (!roots) return std::nullopt;
  return std::clamp(roots->second, 0.0, 1.0);
}

std::optional<Vec2> line_intersection(Vec2 p, Vec2 u, Vec2 q, Vec2 v) {
  const double denom = cross(u, v);
  const double scale = norm(u) * norm(v);
  if (scale == 0.0 || std::abs(denom) <= 1e-12 * scale) return std::nullopt;
  const double s = cross(q - p, v) / denom;
  return p + u * s;
}

}  // namespace scenkit
