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

#include "scenkit/coverage.hpp"

#include <algorithm>
#include <limits>
#include <map>


namespace scenkit {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

using Marks = std::vector<std::vector<std::uint8_t>>;

Marks empty_marks(const ParameterDomain& domain) {
  Marks m;
  for (const auto& axis : domain.axes) m.emplace_back(axis.bin_count(), 0);
  return m;
}

// False when point i lies outside some axis; `bad_axis` names it.
bool mark_point(const ParameterDomain& domain, const ScenarioParameters& p, Marks& marks,
                std::size_t& bad_axis) {
  for (std::size_t a = 0; a < domain.axes.size(); ++a) {
    const auto& axis = domain.axes[a];
    const double v = p.get(axis.id);
    if (!axis.contains(v) || axis.bin_centers.empty()) {
      bad_axis = a;
      return false;
    }
    marks[a][bin_index(axis, v)] = 1;
  }
  return true;
}

CoverageReport summarize(const ParameterDomain& domain, const Marks& marks) {
  CoverageReport r;
  const double dims = static_cast<double>(domain.axes.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < domain.axes.size(); ++a) {
    const auto& axis = domain.axes[a];
    AxisCoverage c;
    c.id = axis.id;
    c.name = axis.name;
    c.total_bins = axis.bin_count();
    c.tested_bins = static_cast<std::size_t>(std::count(marks[a].begin(), marks[a].end(), 1));
    c.coverage = c.total_bins ? static_cast<double>(c.tested_bins) /
                                    static_cast<double>(c.total_bins)
                              : 0.0;
    c.weight = axis.weight;
    sum += c.coverage;
    r.sci_weighted += c.weight * c.coverage;
    r.axes.push_back(c);
  }
  r.sci_uniform = dims > 0 ? sum / dims : 0.0;
  return r;
}

[[noreturn]] void throw_outside(const ParameterDomain& domain, std::size_t ordinal,
                                std::size_t axis) {
  throw CoverageError(ordinal, domain.axes[axis].name);
}

std::vector<std::size_t> critical_axis_slots(const ParameterDomain& domain,
                                             const CriticalSet& critical) {
  if (critical.cells.empty()) throw ConfigurationError("critical set is empty");
  std::vector<std::size_t> slots;
  for (ParameterId id : critical.axes) {
    const ParameterAxis* axis = domain.find(id);
    if (!axis) {
      throw ConfigurationError("critical axis '" + std::string(parameter_name(id)) +
                               "' not in domain");
    }
    slots.push_back(static_cast<std::size_t>(axis - domain.axes.data()));
  }
  for (const auto& cell : critical.cells) {
    if (cell.size() != slots.size()) {
      throw ConfigurationError("critical cell dimension does not match its axes");
    }
    for (std::size_t d = 0; d < cell.size(); ++d) {
      if (cell[d] >= domain.axes[slots[d]].bin_count()) {
        throw ConfigurationError("critical cell bin out of range");
      }
    }
  }
  return slots;
}

}  // namespace

CoverageError::CoverageError(std::size_t ordinal, const std::string& axis)
    : std::out_of_range("campaign point " + std::to_string(ordinal) + " is outside the " +
                        axis + " range"),
      ordinal_(ordinal) {}

CoverageReport compute_sci_serial(const Campaign& campaign, const ParameterDomain& domain) {
  Marks marks = empty_marks(domain);
  for (std::size_t i = 0; i < campaign.points.size(); ++i) {
    std::size_t bad = 0;
    if (!mark_point(domain, campaign.points[i], marks, bad)) throw_outside(domain, i, bad);
  }
  return summarize(domain, marks);
}

CoverageReport compute_sci(const Campaign& campaign, const ParameterDomain& domain) {
  const auto n = static_cast<std::ptrdiff_t>(campaign.points.size());
  Marks marks = empty_marks(domain);
  std::size_t first_bad = kNone;
  std::size_t first_bad_axis = 0;
#pragma omp parallel
  {
    Marks local = empty_marks(domain);
    std::size_t bad = kNone;
    std::size_t bad_axis = 0;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      std::size_t axis = 0;
      const auto ord = static_cast<std::size_t>(i);
      if (!mark_point(domain, campaign.points[ord], local, axis) && ord < bad) {
        bad = ord;
        bad_axis = axis;
      }
    }
#pragma omp critical(scenkit_coverage_merge)
    {
      for (std::size_t a = 0; a < marks.size(); ++a) {
        for (std::size_t k = 0; k < marks[a].size(); ++k) marks[a][k] |= local[a][k];
      }
      if (bad < first_bad) {
        first_bad = bad;
        first_bad_axis = bad_axis;
      }
    }
  }
  if (first_bad != kNone) throw_outside(domain, first_bad, first_bad_axis);
  return summarize(domain, marks);
}

double compute_rc(const Campaign& campaign, const ParameterDomain& domain,
                  const CriticalSet& critical) {
  const std::vector<std::size_t> slots = critical_axis_slots(domain, critical);
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (const auto& cell : critical.cells) index.emplace(cell, index.size());

  const auto n = static_cast<std::ptrdiff_t>(campaign.points.size());
  std::vector<std::uint8_t> hit(index.size(), 0);
  std::size_t first_bad = kNone;
  std::size_t first_bad_axis = 0;
#pragma omp parallel
  {
    std::vector<std::uint8_t> local(index.size(), 0);
    std::vector<std::size_t> key(slots.size());
    std::size_t bad = kNone;
    std::size_t bad_axis = 0;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto ord = static_cast<std::size_t>(i);
      const ScenarioParameters& p = campaign.points[ord];
      bool inside = true;
      for (std::size_t d = 0; d < slots.size() && inside; ++d) {
        const auto& axis = domain.axes[slots[d]];
        const double v = p.get(axis.id);
        if (!axis.contains(v)) {
          inside = false;
          if (ord < bad) {
            bad = ord;
            bad_axis = slots[d];
          }
        } else {
          key[d] = bin_index(axis, v);
        }
      }
      if (!inside) continue;
      if (const auto it = index.find(key); it != index.end()) local[it->second] = 1;
    }
#pragma omp critical(scenkit_rc_merge)
    {
      for (std::size_t c = 0; c < hit.size(); ++c) hit[c] |= local[c];
      if (bad < first_bad) {
        first_bad = bad;
        first_bad_axis = bad_axis;
      }
    }
  }
  if (first_bad != kNone) throw_outside(domain, first_bad, first_bad_axis);
  const auto tested = static_cast<double>(std::count(hit.begin(), hit.end(), 1));
  return tested / static_cast<double>(hit.size());
}

CoverageReport compute_coverage(const Campaign& campaign, const ParameterDomain& domain,
                                const CriticalSet& critical) {
  CoverageReport r = compute_sci(campaign, domain);
  r.r_c = compute_rc(campaign, domain, critical);
  r.critical_cells_total = critical.cells.size();
  r.critical_cells_tested = static_cast<std::size_t>(
      r.r_c * static_cast<double>(critical.cells.size()) + 0.5);
  r.critical_predicate = critical.predicate;
  return r;
}

}  // namespace scenkit
