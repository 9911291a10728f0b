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

#include "scenkit/sampler.hpp"

#include <cmath>
#include <sstream>

#include "scenkit/compiler.hpp"
#include "scenkit/numfmt.hpp"
#include "scenkit/prng.hpp"

namespace scenkit {

std::string Campaign::strategy_label() const {
  switch (strategy) {
    case SamplingStrategy::kGrid: return "grid";
    case SamplingStrategy::kUniformRandom:
      return "uniform_random(" + std::to_string(points.size()) + ")";
    case SamplingStrategy::kStratified:
      return "stratified(" + std::to_string(points.size()) + ")";
    case SamplingStrategy::kDslRanges: return "dsl_ranges";
  }
  return "?";
}

namespace {

void assign_seeds(Campaign& c) {
  c.seeds.resize(c.points.size());
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    c.seeds[i] = prng::point_seed(c.master_seed, i);
  }
}

double lerp(double lo, double hi, double u) { return lo + u * (hi - lo); }

}  // namespace

Campaign grid_campaign(const ParameterDomain& domain, std::uint64_t master_seed) {
  Campaign c;
  c.domain = domain;
  c.strategy = SamplingStrategy::kGrid;
  c.master_seed = master_seed;
  const std::size_t cells = domain.cell_count();
  c.points.reserve(cells);
  std::vector<std::size_t> idx(domain.axes.size(), 0);
  for (std::size_t n = 0; n < cells; ++n) {
    ScenarioParameters p = nominal_parameters();
    for (std::size_t a = 0; a < domain.axes.size(); ++a) {
      p.set(domain.axes[a].id, domain.axes[a].bin_centers[idx[a]]);
    }
    c.points.push_back(p);
    // Odometer increment, last axis fastest.
    for (std::size_t a = domain.axes.size(); a-- > 0;) {
      if (++idx[a] < domain.axes[a].bin_count()) break;
      idx[a] = 0;
    }
  }
  assign_seeds(c);
  return c;
}

Campaign random_campaign(const ParameterDomain& domain, std::size_t n,
                         std::uint64_t master_seed) {
  Campaign c;
  c.domain = domain;
  c.strategy = SamplingStrategy::kUniformRandom;
  c.master_seed = master_seed;
  c.points.reserve(n);
  const std::size_t dims = domain.axes.size();
  for (std::size_t i = 0; i < n; ++i) {
    ScenarioParameters p = nominal_parameters();
    for (std::size_t a = 0; a < dims; ++a) {
      const auto& axis = domain.axes[a];
      const double u = prng::unit_draw(master_seed, i * dims + a);
      p.set(axis.id, lerp(axis.range_min, axis.range_max, u));
    }
    c.points.push_back(p);
  }
  assign_seeds(c);
  return c;
}

std::pair<double, double> bin_cell(const ParameterAxis& axis, std::size_t k) {
  const auto& c = axis.bin_centers;
  const double lo = k == 0 ? axis.range_min : 0.5 * (c[k - 1] + c[k]);
  const double hi = k + 1 == c.size() ? axis.range_max : 0.5 * (c[k] + c[k + 1]);
  return {lo, hi};
}

Campaign stratified_campaign(const ParameterDomain& domain, std::size_t n,
                             std::uint64_t master_seed, std::span<const ParameterId> strata) {
  std::vector<const ParameterAxis*> strata_axes;
  std::size_t stratum_count = 1;
  for (ParameterId id : strata) {
    const ParameterAxis* axis = domain.find(id);
    if (!axis) {
      throw ConfigurationError("stratification axis '" + std::string(parameter_name(id)) +
                               "' not in domain");
    }
    strata_axes.push_back(axis);
    stratum_count *= axis->bin_count();
  }

  Campaign c;
  c.domain = domain;
  c.strategy = SamplingStrategy::kStratified;
  c.master_seed = master_seed;
  c.points.reserve(n);
  const std::size_t dims = domain.axes.size();
  for (std::size_t i = 0; i < n; ++i) {
    ScenarioParameters p = nominal_parameters();
    for (std::size_t a = 0; a < dims; ++a) {
      const auto& axis = domain.axes[a];
      p.set(axis.id, lerp(axis.range_min, axis.range_max,
                          prng::unit_draw(master_seed, i * dims + a)));
    }
    // Decode the stratum, last stratification axis fastest.
    std::size_t rem = i % stratum_count;
    for (std::size_t s = strata_axes.size(); s-- > 0;) {
      const ParameterAxis& axis = *strata_axes[s];
      const std::size_t k = rem % axis.bin_count();
      rem /= axis.bin_count();
      auto [lo, hi] = bin_cell(axis, k);
      // A value exactly on the lower edge would bin to k - 1 (ties go low).
      if (k > 0) lo = std::nextafter(lo, hi);
      const std::size_t a = static_cast<std::size_t>(strata_axes[s] - domain.axes.data());
      p.set(axis.id, lerp(lo, hi, prng::unit_draw(master_seed, i * dims + a)));
    }
    c.points.push_back(p);
  }
  assign_seeds(c);
  return c;
}

Campaign range_campaign(std::span<const AxisValues> axes, const ScenarioParameters& base,
                        std::uint64_t master_seed) {
  Campaign c;
  c.domain = default_domain();
  c.strategy = SamplingStrategy::kDslRanges;
  c.master_seed = master_seed;
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  c.points.reserve(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    ScenarioParameters p = base;
    for (std::size_t a = 0; a < axes.size(); ++a) p.set(axes[a].id, axes[a].values[idx[a]]);
    c.points.push_back(p);
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++idx[a] < axes[a].values.size()) break;
      idx[a] = 0;
    }
  }
  assign_seeds(c);
  return c;
}

std::vector<double> expand_step(double lo, double hi, double step) {
  std::vector<double> out;
  if (!(step > 0.0) || !(lo <= hi)) return out;
  const double tol = 1e-9 * step;
  for (std::size_t k = 0;; ++k) {
    const double v = lo + static_cast<double>(k) * step;
    if (v > hi + tol) break;
    out.push_back(v > hi ? hi : v);
  }
  return out;
}

std::vector<double> expand_count(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  if (count == 0 || !(lo <= hi)) return out;
  if (count == 1) return {lo};
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(k + 1 == count
                      ? hi
                      : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  return out;
}

CriticalSet critical_cells(const ParameterDomain& domain) {
  const ParameterAxis* speed = domain.find(ParameterId::kEgoSpeed);
  const ParameterAxis* dist = domain.find(ParameterId::kInitialDistance);
  if (!speed || !dist) {
    throw ConfigurationError("critical set needs ego_speed and initial_distance axes");
  }
  CriticalSet set;
  set.predicate = "ego_speed bin >= 40 km/h AND initial_distance bin <= 20 m";
  set.axes = {ParameterId::kEgoSpeed, ParameterId::kInitialDistance};
  for (std::size_t i = 0; i < speed->bin_count(); ++i) {
    if (speed->bin_centers[i] < 40.0) continue;
    for (std::size_t j = 0; j < dist->bin_count(); ++j) {
      if (dist->bin_centers[j] <= 20.0) set.cells.push_back({i, j});
    }
  }
  if (set.cells.empty()) {
    throw ConfigurationError("critical set is empty: no bins satisfy '" + set.predicate + "'");
  }
  return set;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

ManifestError::ManifestError(std::size_t line, const std::string& what)
    : std::runtime_error("manifest line " + std::to_string(line) + ": " + what), line_(line) {}

std::string Manifest::spec_id(const ManifestEntry& e) const {
  std::string num = std::to_string(e.ordinal);
  if (num.size() < 5) num.insert(0, 5 - num.size(), '0');
  return id_prefix + "-" + num;
}

std::vector<ScenarioSpec> Manifest::specs() const {
  std::vector<ScenarioSpec> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    out.push_back(
        compile_scenario(e.archetype, e.parameters, environment, e.seed, spec_id(e), duration));
  }
  return out;
}

Campaign Manifest::campaign() const {
  Campaign c;
  c.domain = default_domain();
  c.master_seed = master_seed;
  if (strategy == "grid") c.strategy = SamplingStrategy::kGrid;
  else if (strategy.starts_with("uniform_random")) c.strategy = SamplingStrategy::kUniformRandom;
  else if (strategy.starts_with("stratified")) c.strategy = SamplingStrategy::kStratified;
  else c.strategy = SamplingStrategy::kDslRanges;
  for (const auto& e : entries) {
    c.points.push_back(e.parameters);
    c.seeds.push_back(e.seed);
  }
  return c;
}

Manifest make_manifest(const Campaign& campaign, std::span<const ArchetypeId> archetypes,
                       const Environment& environment, double duration,
                       std::string id_prefix) {
  if (archetypes.empty()) throw ConfigurationError("manifest needs at least one archetype");
  Manifest m;
  m.strategy = campaign.strategy_label();
  m.master_seed = campaign.master_seed;
  m.environment = environment;
  m.duration = duration;
  m.id_prefix = std::move(id_prefix);
  for (std::size_t i = 0; i < campaign.points.size(); ++i) {
    m.entries.push_back(
        {i, archetypes[i % archetypes.size()], campaign.points[i], campaign.seeds[i]});
  }
  return m;
}

namespace {

constexpr std::string_view kManifestMagic = "# scenkit-manifest v1";
constexpr std::string_view kManifestHeader =
    "ordinal,archetype,ego_speed,agent_speed,approach_angle,initial_distance,"
    "appearance_time,seed";

}  // namespace

std::string write_manifest(const Manifest& m) {
  std::ostringstream os;
  os << kManifestMagic << "\n";
  os << "# strategy: " << m.strategy << "\n";
  os << "# master_seed: " << m.master_seed << "\n";
  os << "# weather: " << weather_name(m.environment.weather) << "\n";
  os << "# lighting: " << lighting_name(m.environment.lighting) << "\n";
  os << "# friction: " << format_double(m.environment.friction) << "\n";
  os << "# detection_delay: " << format_double(m.environment.extra_detection_delay) << " s\n";
  os << "# duration: " << format_double(m.duration) << " s\n";
  os << "# id_prefix: " << m.id_prefix << "\n";
  os << kManifestHeader << "\n";
  for (const auto& e : m.entries) {
    os << e.ordinal << ',' << archetype_code(e.archetype);
    for (ParameterId id : kAllParameters) {
      os << ',' << format_double(e.parameters.get(id)) << ' ' << parameter_unit(id);
    }
    os << ',' << e.seed << "\n";
  }
  return os.str();
}

namespace {

double parse_with_unit(std::string_view cell, std::string_view unit, std::size_t line) {
  cell = trim(cell);
  const auto sp = cell.rfind(' ');
  if (sp == std::string_view::npos) throw ManifestError(line, "missing unit in '" + std::string(cell) + "'");
  if (trim(cell.substr(sp + 1)) != unit) {
    throw ManifestError(line, "expected unit " + std::string(unit) + " in '" +
                                  std::string(cell) + "'");
  }
  const auto v = parse_double(cell.substr(0, sp));
  if (!v) throw ManifestError(line, "malformed number in '" + std::string(cell) + "'");
  return *v;
}

}  // namespace

Manifest read_manifest(std::string_view text) {
  Manifest m;
  const auto lines = split(text, '\n');
  std::size_t lineno = 0;
  bool magic = false;
  bool header = false;
  bool have_weather = false;
  bool have_lighting = false;
  std::optional<double> friction;
  std::optional<double> delay;
  for (auto raw : lines) {
    ++lineno;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line == kManifestMagic) {
        magic = true;
        continue;
      }
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) continue;
      const auto key = trim(line.substr(1, colon - 1));
      const auto val = trim(line.substr(colon + 1));
      if (key == "strategy") {
        m.strategy = std::string(val);
      } else if (key == "master_seed") {
        const auto s = parse_u64(val);
        if (!s) throw ManifestError(lineno, "bad master_seed");
        m.master_seed = *s;
      } else if (key == "weather") {
        const auto w = weather_from_name(val);
        if (!w) throw ManifestError(lineno, "unknown weather");
        m.environment.weather = *w;
        have_weather = true;
      } else if (key == "lighting") {
        const auto l = lighting_from_name(val);
        if (!l) throw ManifestError(lineno, "unknown lighting");
        m.environment.lighting = *l;
        have_lighting = true;
      } else if (key == "friction") {
        friction = parse_double(val);
        if (!friction) throw ManifestError(lineno, "bad friction");
      } else if (key == "detection_delay") {
        delay = parse_with_unit(val, "s", lineno);
      } else if (key == "duration") {
        m.duration = parse_with_unit(val, "s", lineno);
      } else if (key == "id_prefix") {
        m.id_prefix = std::string(val);
      }
      continue;
    }
    if (!header) {
      if (line != kManifestHeader) throw ManifestError(lineno, "missing or malformed header row");
      header = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 8) throw ManifestError(lineno, "expected 8 columns");
    ManifestEntry e;
    const auto ord = parse_u64(cells[0]);
    if (!ord) throw ManifestError(lineno, "bad ordinal");
    e.ordinal = static_cast<std::size_t>(*ord);
    const auto arch = archetype_from_code(trim(cells[1]));
    if (!arch) throw ManifestError(lineno, "unknown archetype");
    e.archetype = *arch;
    for (std::size_t k = 0; k < kAllParameters.size(); ++k) {
      const ParameterId id = kAllParameters[k];
      e.parameters.set(id, parse_with_unit(cells[2 + k], parameter_unit(id), lineno));
    }
    const auto seed = parse_u64(cells[7]);
    if (!seed) throw ManifestError(lineno, "bad seed");
    e.seed = *seed;
    m.entries.push_back(e);
  }
  if (!magic) throw ManifestError(1, "not a scenkit manifest");
  if (!header) throw ManifestError(lineno, "missing header row");
  if (!have_weather || !have_lighting) throw ManifestError(1, "missing environment");
  m.environment.friction = friction.value_or(default_friction(m.environment.weather));
  m.environment.extra_detection_delay =
      delay.value_or(default_detection_delay(m.environment.lighting));
  return m;
}

}  // namespace scenkit
