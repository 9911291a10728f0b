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

#ifndef SCENKIT_COVERAGE_HPP_
#define SCENKIT_COVERAGE_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "scenkit/model.hpp"
#include "scenkit/sampler.hpp"

namespace scenkit {

struct AxisCoverage {
  ParameterId id = ParameterId::kEgoSpeed;
  std::string name;
  std::size_t tested_bins = 0;
  std::size_t total_bins = 0;
  double coverage = 0.0;  // tested / total
  double weight = 0.0;

  friend bool operator==(const AxisCoverage&, const AxisCoverage&) = default;
};

struct CoverageReport {
  std::vector<AxisCoverage> axes;
  double sci_uniform = 0.0;
  double sci_weighted = 0.0;
  double r_c = 0.0;
  std::size_t critical_cells_tested = 0;
  std::size_t critical_cells_total = 0;
  std::string critical_predicate;

  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

// A campaign point that falls outside the domain.
class CoverageError : public std::out_of_range {
 public:
  CoverageError(std::size_t ordinal, const std::string& axis);
  std::size_t ordinal() const { return ordinal_; }

 private:
  std::size_t ordinal_;
};

// Per-axis bin coverage and both SCI variants; the critical-set fields are
// left zero. Bin marking runs in parallel with thread-local marks merged by
// OR, so the result does not depend on the thread count.
CoverageReport compute_sci(const Campaign& campaign, const ParameterDomain& domain);
// Single-threaded reference for the same quantity.
CoverageReport compute_sci_serial(const Campaign& campaign, const ParameterDomain& domain);

// Fraction of critical cells hit jointly on all of the cell's axes by at
// least one point. Throws ConfigurationError for an empty set or an axis the
// domain lacks.
double compute_rc(const Campaign& campaign, const ParameterDomain& domain,
                  const CriticalSet& critical);

// compute_sci plus the R_c fields for `critical`.
CoverageReport compute_coverage(const Campaign& campaign, const ParameterDomain& domain,
                                const CriticalSet& critical);

}  // namespace scenkit

#endif  // SCENKIT_COVERAGE_HPP_
