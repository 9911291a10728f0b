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


#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "scenkit/coverage.hpp"
#include "scenkit/sampler.hpp"
#include "test_support.hpp"

namespace scenkit {
namespace {

Campaign of_points(std::vector<ScenarioParameters> points) {
  Campaign c;
  c.domain = default_domain();
  c.points = std::move(points);
  c.seeds.resize(c.points.size());
  for (std::size_t i = 0; i < c.seeds.size(); ++i) c.seeds[i] = i;
  return c;
}

// Brute-force oracle: distinct bins per axis found by a nearest-centre scan.
double oracle_sci(const Campaign& c, const ParameterDomain& d) {
  double sum = 0.0;
  for (const auto& axis : d.axes) {
    std::set<std::size_t> hit;
    for (const auto& p : c.points) {
      const double v = p.get(axis.id);
      std::size_t best = 0;
      for (std::size_t k = 1; k < axis.bin_count(); ++k) {
        if (std::abs(v - axis.bin_centers[k]) < std::abs(v - axis.bin_centers[best])) best = k;
      }
      hit.insert(best);
    }
    sum += static_cast<double>(hit.size()) / static_cast<double>(axis.bin_count());
  }
  return sum / static_cast<double>(d.axes.size());
}

TEST(Sci, FullGridIsExactlyOne) {
  const ParameterDomain d = default_domain();
  const CoverageReport r = compute_coverage(grid_campaign(d), d, critical_cells(d));
  EXPECT_EQ(r.sci_uniform, 1.0);
  EXPECT_EQ(r.sci_weighted, 1.0);
  EXPECT_EQ(r.r_c, 1.0);
  EXPECT_EQ(r.critical_cells_tested, 9u);
  EXPECT_EQ(r.critical_cells_total, 9u);
  for (const auto& a : r.axes) EXPECT_EQ(a.tested_bins, a.total_bins);
}

TEST(Sci, EmptyCampaignIsZero) {
  const ParameterDomain d = default_domain();
  const CoverageReport r = compute_sci(of_points({}), d);
  EXPECT_EQ(r.sci_uniform, 0.0);
  EXPECT_EQ(r.sci_weighted, 0.0);
  for (const auto& a : r.axes) EXPECT_EQ(a.coverage, 0.0);
  EXPECT_EQ(compute_rc(of_points({}), d, critical_cells(d)), 0.0);
}

TEST(Sci, AllSpeedBinsOneBinElsewhere) {
  std::vector<ScenarioParameters> pts;
  for (double v : {20, 25, 30, 35, 40, 45, 50}) pts.push_back({v, 1.5, 90, 30, 0});
  const CoverageReport r = compute_sci(of_points(pts), default_domain());
  const double hand = (1.0 + 1.0 / 5 + 1.0 / 8 + 1.0 / 9 + 1.0 / 6) / 5.0;
  EXPECT_NEAR(r.sci_uniform, hand, 1e-12);
  EXPECT_NEAR(r.sci_uniform, 0.32056, 1e-5);
  EXPECT_NEAR(r.sci_weighted, r.sci_uniform, 1e-12);
  EXPECT_EQ(r.axes[0].tested_bins, 7u);
  EXPECT_EQ(r.axes[2].tested_bins, 1u);
}

TEST(Sci, WeightsApply) {
  ParameterDomain d = default_domain();
  d.axes[0].weight = 0.6;
  for (std::size_t a = 1; a < 5; ++a) d.axes[a].weight = 0.1;
  std::vector<ScenarioParameters> pts;
  for (double v : {20, 25, 30, 35, 40, 45, 50}) pts.push_back({v, 1.5, 90, 30, 0});
  const CoverageReport r = compute_sci(of_points(pts), d);
  EXPECT_NEAR(r.sci_weighted, 0.6 + 0.1 * (1.0 / 5 + 1.0 / 8 + 1.0 / 9 + 1.0 / 6), 1e-12);
}

TEST(Sci, OutsidePointIsRefusedWithItsOrdinal) {
  std::vector<ScenarioParameters> pts(5);
  pts[3].initial_distance = 70.0;
  try {
    compute_sci(of_points(pts), default_domain());
    FAIL();
  } catch (const CoverageError& e) {
    EXPECT_EQ(e.ordinal(), 3u);
    EXPECT_NE(std::string(e.what()).find("initial_distance"), std::string::npos);
  }
  EXPECT_THROW(compute_sci_serial(of_points(pts), default_domain()), CoverageError);
}

TEST(Rc, SevenOfNine) {
  const ParameterDomain d = default_domain();
  std::vector<ScenarioParameters> pts;
  int placed = 0;
  for (double v : {40.0, 45.0, 50.0}) {
    for (double x : {10.0, 15.0, 20.0}) {
      if (placed++ < 7) pts.push_back({v, 1.5, 90, x, 0});
    }
  }
  // Marginal hits of the remaining cells on different points do not count.
  pts.push_back({50, 1.5, 90, 40, 0});
  pts.push_back({30, 1.5, 90, 15, 0});
  EXPECT_NEAR(compute_rc(of_points(pts), d, critical_cells(d)), 7.0 / 9.0, 1e-15);
}

TEST(Rc, NoHighSpeedPointIsZero) {
  const ParameterDomain d = default_domain();
  std::vector<ScenarioParameters> pts;
  for (double x : {10.0, 15.0, 20.0}) pts.push_back({35, 1.5, 90, x, 0});
  EXPECT_EQ(compute_rc(of_points(pts), d, critical_cells(d)), 0.0);
}

TEST(Rc, BadCriticalSetsAreRefused) {
  const ParameterDomain d = default_domain();
  CriticalSet cs = critical_cells(d);
  cs.cells.clear();
  EXPECT_THROW(compute_rc(of_points({}), d, cs), ConfigurationError);
  cs = critical_cells(d);
  cs.cells[0].push_back(1);
  EXPECT_THROW(compute_rc(of_points({}), d, cs), ConfigurationError);
}

// Random campaigns: brute-force agreement, monotone growth, permutation
// invariance, serial/parallel agreement and the lower bound.
TEST(Properties, RandomCampaigns) {
  const ParameterDomain d = default_domain();
  const CriticalSet cs = critical_cells(d);
  testing::Gen g(71);
  for (int n = 0; n < 200; ++n) {
    std::vector<ScenarioParameters> pts(1 + g.index(60));
    for (auto& p : pts) {
      p = testing::random_parameters(g);
      if (g.coin(0.3)) p.ego_speed = d.axes[0].bin_centers[g.index(7)];
    }
    const Campaign c = of_points(pts);
    const CoverageReport r = compute_coverage(c, d, cs);
    ASSERT_NEAR(r.sci_uniform, oracle_sci(c, d), 1e-12);
    ASSERT_NEAR(r.sci_weighted, r.sci_uniform, 1e-12);
    ASSERT_EQ(r, compute_coverage(c, d, cs));
    const CoverageReport serial = compute_sci_serial(c, d);
    ASSERT_EQ(serial.axes, r.axes);
    ASSERT_EQ(serial.sci_uniform, r.sci_uniform);
    ASSERT_GE(r.sci_uniform, 1.0 / (5.0 * 9.0));

    std::vector<ScenarioParameters> shuffled = pts;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[g.index(i)]);
    const CoverageReport rs = compute_coverage(of_points(shuffled), d, cs);
    ASSERT_EQ(rs.axes, r.axes);
    ASSERT_EQ(rs.sci_uniform, r.sci_uniform);
    ASSERT_EQ(rs.r_c, r.r_c);

    std::vector<ScenarioParameters> more = pts;
    more.push_back(testing::random_parameters(g));
    const CoverageReport rm = compute_coverage(of_points(more), d, cs);
    ASSERT_GE(rm.sci_uniform, r.sci_uniform);
    ASSERT_GE(rm.sci_weighted, r.sci_weighted);
    ASSERT_GE(rm.r_c, r.r_c);
    for (std::size_t a = 0; a < 5; ++a) ASSERT_GE(rm.axes[a].coverage, r.axes[a].coverage);
  }
}

TEST(Properties, ThreadCountDoesNotMatter) {
  const ParameterDomain d = default_domain();
  const Campaign c = random_campaign(d, 50000, 5);
  const CoverageReport serial = compute_sci_serial(c, d);
  const CoverageReport parallel = compute_sci(c, d);
  EXPECT_EQ(serial, parallel);
}

}  // namespace
}  // namespace scenkit
