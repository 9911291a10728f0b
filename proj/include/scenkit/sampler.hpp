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

#ifndef SCENKIT_SAMPLER_HPP_
#define SCENKIT_SAMPLER_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scenkit/model.hpp"

namespace scenkit {

enum class SamplingStrategy { kGrid, kUniformRandom, kStratified, kDslRanges };

struct Campaign {
  ParameterDomain domain;
  std::vector<ScenarioParameters> points;
  std::vector<std::uint64_t> seeds;  // one per point, pairwise distinct
  SamplingStrategy strategy = SamplingStrategy::kGrid;
  std::uint64_t master_seed = 0;

  std::size_t size() const { return points.size(); }
  // "grid", "uniform_random(1024)", "stratified(560)", "dsl_ranges"
  std::string strategy_label() const;
};

// One point per grid cell at the bin centres, first axis most significant.
Campaign grid_campaign(const ParameterDomain& domain, std::uint64_t master_seed = 0);

// n points, each domain axis uniform over its continuous range.
// random_campaign(d, n, s) is a prefix of random_campaign(d, m, s) for n <= m.
Campaign random_campaign(const ParameterDomain& domain, std::size_t n,
                         std::uint64_t master_seed);

// Point i falls in stratum (i mod S) of the bin product over `strata`; the
// stratified axes are drawn uniformly inside that bin's cell, the others
// over their full range.
Campaign stratified_campaign(const ParameterDomain& domain, std::size_t n,
                             std::uint64_t master_seed, std::span<const ParameterId> strata);

struct AxisValues {
  ParameterId id;
  std::vector<double> values;
};

// Cartesian product of explicit per-axis value lists (first list most
// significant). Parameters without a list keep `base`.
Campaign range_campaign(std::span<const AxisValues> axes, const ScenarioParameters& base,
                        std::uint64_t master_seed);

// lo, lo + step, ... up to hi (inclusive within 1e-9 of step).
std::vector<double> expand_step(double lo, double hi, double step);
// `count` evenly spaced values from lo to hi inclusive.
std::vector<double> expand_count(double lo, double hi, std::size_t count);

// Lower and upper edge of the nearest-centre cell of bin k.
std::pair<double, double> bin_cell(const ParameterAxis& axis, std::size_t k);

class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CriticalSet {
  std::string predicate;
  std::vector<ParameterId> axes;
  std::vector<std::vector<std::size_t>> cells;  // bin ordinals, one per entry of `axes`
};

// High-risk cells: ego_speed bin centre >= 40 km/h and initial_distance bin
// centre <= 20 m. Pre-run proxy for "high ego speed with low TTC".
CriticalSet critical_cells(const ParameterDomain& domain);

// ---------------------------------------------------------------------------
// Campaign manifest
// ---------------------------------------------------------------------------

struct ManifestEntry {
  std::size_t ordinal = 0;
  ArchetypeId archetype = ArchetypeId::kS4;
  ScenarioParameters parameters;
  std::uint64_t seed = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::string strategy;
  std::uint64_t master_seed = 0;
  Environment environment;
  double duration = 30.0;
  std::string id_prefix = "scenario";
  std::vector<ManifestEntry> entries;

  std::string spec_id(const ManifestEntry& e) const;
  std::vector<ScenarioSpec> specs() const;
  Campaign campaign() const;  // over the default domain

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

class ManifestError : public std::runtime_error {
 public:
  ManifestError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Manifest make_manifest(const Campaign& campaign, std::span<const ArchetypeId> archetypes,
                       const Environment& environment, double duration,
                       std::string id_prefix);
std::string write_manifest(const Manifest& manifest);
Manifest read_manifest(std::string_view text);

}  // namespace scenkit

#endif  // SCENKIT_SAMPLER_HPP_
