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

#ifndef SCENKIT_REPORT_HPP_
#define SCENKIT_REPORT_HPP_

// Report rendering. JSON is canonical: sorted keys, shortest round-trip
// numbers, "inf" for infinities and null for undefined values. The timing
// object is the only part that varies between identical campaigns.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scenkit/harness.hpp"

namespace scenkit {

class ReportFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string report_to_json(const CampaignReport& report, bool include_timing = true);
CampaignReport report_from_json(std::string_view text);

std::string coverage_to_json(const CoverageReport& coverage);

std::string report_text(const CampaignReport& report);

struct SvgPlot {
  std::string file_name;
  std::string content;
};

// ttc_min_histogram.svg: ttc_min in 0.5 s bins over [0, 6) s plus one
//   overflow bar for >= 6 s and never-on-course runs.
// d_min_vs_speed.svg: d_min (0..60 m, larger values pinned at the top)
//   against ego speed (20..50 km/h); collisions drawn as crosses.
// risk_histogram.svg: Low / Medium / High run counts.
std::vector<SvgPlot> report_svgs(const CampaignReport& report);

}  // namespace scenkit

#endif  // SCENKIT_REPORT_HPP_
