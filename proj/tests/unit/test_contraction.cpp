#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mmslab/contraction.hpp"
#include "mmslab/error.hpp"
#include "mmslab/generators.hpp"

namespace mmslab {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Coefficient, MatchesTheFormulaAndItsLimit) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  std::uniform_real_distribution<double> l(0.01, 3.0);
  for (int rep = 0; rep < 200; ++rep) {
    const double tt = t(rng);
    const double ll = l(rng);
    const long double direct = tt * std::pow(std::sin(static_cast<long double>(tt) * ll), 2) /
                               std::pow(std::sin(static_cast<long double>(ll)), 2);
    EXPECT_NEAR(mcp_coefficient(tt, ll), static_cast<double>(direct), 1e-12 * (1 + direct));
  }
  for (double tt : {0.0, 0.3, 1.0}) {
    EXPECT_NEAR(mcp_coefficient(tt, 0.0), tt * tt * tt, 1e-15);
    EXPECT_NEAR(mcp_coefficient(tt, 1e-9), tt * tt * tt, 1e-12);
  }
  EXPECT_DOUBLE_EQ(mcp_coefficient(1.0, 1.2), 1.0);
}

TEST(Coefficient, IsIncreasingInTime) {
  for (double l : {0.0, 0.5, 1.5}) {  // t l stays below pi/2
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
      const double c = mcp_coefficient(i / 100.0, l);
      EXPECT_GE(c, prev);
      prev = c;
    }
  }
}

TEST(TimeSamples, ChebyshevSetIncludesEndpoints) {
  const auto t = default_t_samples({0.25, 0.25});
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 1.0);
  EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
  EXPECT_EQ(std::adjacent_find(t.begin(), t.end()), t.end());
  EXPECT_EQ(t.size(), 34u);
}

TEST(ScalarBound, GridCheckAgreesWithPointwiseEvaluation) {
  const auto r = scalar_bound_check(200, 200);
  EXPECT_TRUE(r.holds);
  // Independent evaluation at random points of the domain.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> t(1e-9, 0.2);
  std::uniform_real_distribution<double> d(1e-6, kPi / 2 + 0.25);
  for (int rep = 0; rep < 20000; ++rep) {
    const long double tt = t(rng);
    const long double dd = d(rng);
    const long double lhs = 1.25L - tt / 4.0L;
    const long double rhs = tt * std::pow(std::sin(dd), 2) / std::pow(std::sin(tt * dd), 2);
    EXPECT_GE(rhs - lhs, -1e-12L);
  }
  EXPECT_NEAR(r.min_margin,
              0.2 * std::pow(std::sin(kPi / 2 + 0.25), 2) / std::pow(std::sin(0.2 * (kPi / 2 + 0.25)), 2) -
                  (1.25 - 0.05),
              1e-12);
}

TEST(ScalarBound, FailsOutsideTheDomain) {
  EXPECT_FALSE(scalar_bound_check(50, 50, 0.5, 1.0, 1.0, 3.0).holds);
}

TEST(MCP, SegmentPassesWithTheDefaultAllowance) {
  const auto s = segment_space(kPi / 100);
  std::vector<std::size_t> A;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.point(i).coords[0] >= kPi / 4) A.push_back(i);
  }
  const auto plan = mcp_plan(s, 0, A);
  const auto r = mcp_check(s, 0, A, plan, {{}, -1.0, PushforwardMode::kNearest, true});
  EXPECT_TRUE(r.pass) << r.worst_slack;
  EXPECT_EQ(r.allowance, default_mcp_allowance(s));
  EXPECT_FALSE(r.records.empty());
  for (const auto& rec : r.records) EXPECT_NEAR(rec.slack, rec.rhs - rec.lhs, 1e-15);
}

TEST(MCP, RejectsForeignPlans) {
  const auto s = segment_space(kPi / 40);
  const auto plan = mcp_plan(s, 0, {10, 11});
  EXPECT_THROW(mcp_check(s, 0, {10, 12}, plan), Error);
  EXPECT_THROW(mcp_check(s, 1, {10, 11}, plan), Error);
}

class Schedule : public ::testing::Test {
 protected:
  FiniteMMS s = necklace({{{0.4, 0.3}, {1.1, 0.3}}, kPi / 200, 8});
  NecklaceLayout L = necklace_layout(s);
  ScheduleParams params() const {
    ScheduleParams p;
    const auto& f1 = L.fibers[0];
    const auto& f2 = L.fibers[1];
    std::size_t a = 0;
    for (std::size_t f = 0; f < f1.size(); ++f) {
      if (std::abs(f1[f].x - 0.4) < std::abs(f1[a].x - 0.4)) a = f;
    }
    std::size_t b = 0;
    for (std::size_t f = 0; f < f2.size(); ++f) {
      if (std::abs(f2[f].x - 1.1) < std::abs(f2[b].x - 1.1)) b = f;
    }
    p.source = f1[a].cells[4];
    p.target_fiber = b;
    p.target_ycells = {2, 3, 4, 5};
    return p;
  }
};

TEST_F(Schedule, HeightsOfFullFibers) {
  for (std::size_t k = 0; k < 2; ++k) {
    for (const auto& f : L.fibers[k]) {
      EXPECT_NEAR(height(L, f.x, f.cells), 2.0 * f.half_height, 1e-15);
      EXPECT_NEAR(diamond_height(L, k, f.x), 2.0 * f.half_height, 1e-15);
    }
  }
}

TEST_F(Schedule, AtomsAreConstantSpeedAndMarginalsMatch) {
  const auto p = params();
  const auto plan = necklace_schedule(s, p);
  const auto g = schedule_geometry(L, p);
  ASSERT_EQ(plan.atoms.size(), p.target_ycells.size());
  const Measure target = normalized_restriction(s, g.target_cells);
  std::vector<double> got(s.size(), 0.0);
  for (const auto& atom : plan.atoms) {
    EXPECT_EQ(atom.geodesic.front(), p.source);
    EXPECT_LT(constant_speed_defect(s, atom.geodesic), 1e-12);
    got[atom.geodesic.back()] += atom.mass;
  }
  const auto want = target.dense(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  EXPECT_LT(g.t_hat, g.t1);
  EXPECT_LT(g.t1, g.t2);
  EXPECT_LT(g.t2, 1.0);
}

TEST_F(Schedule, DensityCheckAndHeightBound) {
  const auto p = params();
  const auto r = schedule_density_check(s, necklace_schedule(s, p), p);
  EXPECT_TRUE(r.pass) << r.worst_ratio;
  EXPECT_TRUE(r.height_bound_holds) << r.height_bound_worst_margin;
  EXPECT_TRUE(r.in_scalar_domain);
  EXPECT_NEAR(r.allowance, 8.0 * effective_pitch(s), 1e-15);
}

TEST_F(Schedule, RejectsBadParameters) {
  auto p = params();
  p.target_ycells = {9};
  EXPECT_THROW(necklace_schedule(s, p), Error);
  p = params();
  p.source = L.segment_cells.front();
  EXPECT_THROW(necklace_schedule(s, p), Error);
}

}  // namespace
}  // namespace mmslab
