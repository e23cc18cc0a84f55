#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mmslab/error.hpp"
#include "mmslab/generators.hpp"
#include "mmslab/geodesic.hpp"
#include "test_support.hpp"

namespace mmslab {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Geodesic, SegmentChainsVisitEveryCellInOrder) {
  const auto s = segment_space(kPi / 40);
  const auto gs = geodesics_between(s, 3, 12, 4);
  ASSERT_EQ(gs.size(), 1u);  // a segment has one geodesic
  const auto& g = gs[0];
  ASSERT_EQ(g.nodes.size(), 10u);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) EXPECT_EQ(g.nodes[i], 3 + i);
  EXPECT_NEAR(g.length, s.d(3, 12), 1e-15);
  EXPECT_LT(constant_speed_defect(s, g), 1e-12);
}

TEST(Geodesic, CircleAntipodesHaveTwoChains) {
  const auto c = circle_space(1.0, 16);
  const auto gs = geodesics_between(c, 0, 8, 8);
  ASSERT_EQ(gs.size(), 2u);
  EXPECT_FALSE(gs[0] == gs[1]);
  for (const auto& g : gs) EXPECT_LT(constant_speed_defect(c, g), 1e-12);
}

TEST(Geodesic, DiamondVertexChainsHaveEqualLength) {
  const NecklaceParams p{{{0.5, 0.4}}, kPi / 200, 4};
  const auto s = necklace(p);
  const auto L = necklace_layout(s);
  // Segment cells on either side of the diamond.
  std::size_t a = 0;
  std::size_t b = 0;
  for (std::size_t c : L.segment_cells) {
    if (L.cells[c].x < 0.4) a = c;
    if (L.cells[c].x > 0.6 && b == 0) b = c;
  }
  const auto gs = geodesics_between(s, a, b, 16);
  ASSERT_GT(gs.size(), 2u);
  for (const auto& g : gs) {
    EXPECT_NEAR(g.length, std::abs(L.cells[b].x - L.cells[a].x), 1e-12);
    EXPECT_LE(constant_speed_defect(s, g), default_geodesic_tol(s));
  }
}

TEST(Geodesic, EvaluateUsesNearestTimeWithTiesDown) {
  DiscreteGeodesic g{{4, 5, 6}, {0.0, 0.5, 1.0}, 1.0};
  EXPECT_EQ(evaluate(g, 0.0), 4u);
  EXPECT_EQ(evaluate(g, 0.25), 4u);  // tie
  EXPECT_EQ(evaluate(g, 0.26), 5u);
  EXPECT_EQ(evaluate(g, 0.75), 5u);  // tie
  EXPECT_EQ(evaluate(g, 1.0), 6u);
}

TEST(Geodesic, RestrictionScalesLengthAndStaysGeodesic) {
  const auto s = segment_space(kPi / 100);
  const auto g = geodesics_between(s, 0, 40, 1).front();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    double a = unit(rng);
    double b = unit(rng);
    if (a > b) std::swap(a, b);
    const auto r = restrict(g, a, b);
    EXPECT_EQ(r.times.front(), 0.0);
    EXPECT_EQ(r.times.back(), 1.0);
    EXPECT_NEAR(r.length, s.d(r.front(), r.back()), 1e-12);
    EXPECT_LT(constant_speed_defect(s, r), 1e-12);
    EXPECT_EQ(r.front(), evaluate(g, a));
    EXPECT_EQ(r.back(), evaluate(g, b));
  }
  EXPECT_THROW(restrict(g, 0.3, 0.3), Error);
  EXPECT_THROW(restrict(g, 0.6, 0.2), Error);
}

TEST(Geodesic, TrivialGeodesic) {
  const auto s = segment_space(kPi / 10);
  const auto gs = geodesics_between(s, 2, 2, 3);
  ASSERT_EQ(gs.size(), 1u);
  EXPECT_EQ(gs[0], trivial_geodesic(2));
}

TEST(Geodesic, GapsWithoutMidpointsAreDisconnected) {
  // The only neighbour chain from 0 to 2 detours through 1.
  const auto s = testing::from_matrix({{0, 6, 10}, {6, 0, 6}, {10, 6, 0}});
  try {
    geodesics_between(s, 0, 2, 1, GeodesicOptions{1.0, 1e-9});
    FAIL() << "expected kDisconnected";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDisconnected);
  }
}

}  // namespace
}  // namespace mmslab
