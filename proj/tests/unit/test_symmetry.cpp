#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "mmslab/error.hpp"
#include "mmslab/generators.hpp"
#include "mmslab/symmetry.hpp"
#include "test_support.hpp"

namespace mmslab {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Permutation> brute_force_isometries(const FiniteMMS& s, double tol) {
  Permutation p = identity_permutation(s.size());
  std::vector<Permutation> out;
  do {
    if (make_isometry(s, p).distortion <= tol) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<Permutation> perms(const Enumeration& e) {
  std::vector<Permutation> out;
  for (const auto& m : e.maps) out.push_back(m.perm);
  return out;
}

TEST(Permutations, GroupLaws) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    Permutation f = identity_permutation(9);
    Permutation g = identity_permutation(9);
    Permutation h = identity_permutation(9);
    std::shuffle(f.begin(), f.end(), rng);
    std::shuffle(g.begin(), g.end(), rng);
    std::shuffle(h.begin(), h.end(), rng);
    EXPECT_EQ(compose(f, compose(g, h)), compose(compose(f, g), h));
    EXPECT_TRUE(is_identity(compose(f, inverse(f))));
    EXPECT_TRUE(is_identity(compose(inverse(f), f)));
    for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(compose(f, g)[i], f[g[i]]);
  }
}

TEST(Enumeration, MatchesBruteForceOnPolygons) {
  for (std::size_t n = 3; n <= 7; ++n) {
    const auto s = testing::polygon(n);
    const auto e = enumerate_isometries(s);
    ASSERT_TRUE(e.complete);
    EXPECT_EQ(e.maps.size(), 2 * n) << n;  // dihedral group
    EXPECT_EQ(perms(e), brute_force_isometries(s, e.iso_tol));
  }
}

TEST(Enumeration, MatchesBruteForceOnRandomSymmetricSpaces) {
  // Random spaces built from a random partial symmetry: points of a random
  // cloud and their mirror images under x -> -x.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t half = 1 + rep % 3;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < half; ++i) {
      const double x = unit(rng);
      const double y = unit(rng);
      pts.push_back({x, y});
      pts.push_back({-x, y});
    }
    if (rep % 2) pts.push_back({0.0, unit(rng)});
    const std::size_t n = pts.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        d[i][j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
      }
    }
    const auto s = testing::from_matrix(d);
    const auto e = enumerate_isometries(s);
    ASSERT_TRUE(e.complete);
    EXPECT_EQ(perms(e), brute_force_isometries(s, e.iso_tol)) << "rep " << rep;
    EXPECT_GE(e.maps.size(), 2u);
  }
}

TEST(Enumeration, MeasureFlagsFollowWeights) {
  auto s = testing::polygon(4);
  s = FiniteMMS({}, {s.distances().begin(), s.distances().end()}, {1.0, 2.0, 1.0, 2.0}, {});
  const auto e = enumerate_isometries(s);
  ASSERT_EQ(e.maps.size(), 8u);
  std::size_t preserving = 0;
  for (const auto& m : e.maps) preserving += m.measure_preserving;
  EXPECT_EQ(preserving, 4u);  // maps that keep the parity of the vertex
}

TEST(Enumeration, BudgetTruncates) {
  const auto s = hawaiian_truncation(4, 16);
  EnumerationOptions opt;
  opt.node_budget = 5;
  const auto e = enumerate_isometries(s, opt);
  EXPECT_FALSE(e.complete);
}

TEST(Hawaiian, IsometryGroupIsTheProductOfReflections) {
  const std::size_t n = 4;
  const auto h = hawaiian_truncation(n, 16);
  const auto e = enumerate_isometries(h);
  ASSERT_TRUE(e.complete);
  EXPECT_EQ(e.maps.size(), 16u);
  std::vector<Permutation> gens;
  for (std::size_t k = 1; k <= n; ++k) gens.push_back(hawaiian_reflection(n, 16, k));
  const auto g = generate_subgroup(gens);
  EXPECT_TRUE(g.closed);
  EXPECT_EQ(g.elements, perms(e));
}

TEST(Subgroup, BudgetMarksOpenClosure) {
  Permutation cycle = {1, 2, 3, 4, 5, 0};
  const auto full = generate_subgroup({cycle});
  EXPECT_TRUE(full.closed);
  EXPECT_EQ(full.elements.size(), 6u);
  EXPECT_FALSE(generate_subgroup({cycle}, 3).closed);
}

TEST(FixedSets, ReflectionFixesTheOtherCircles) {
  const std::size_t n = 3;
  const std::size_t res = 16;
  const auto h = hawaiian_truncation(n, res);
  const auto f = hawaiian_reflection(n, res, 1);
  const auto fix = fixed_set(h, f, 1e-12);
  // Circle 1 keeps its base point and antipode; the others are fixed.
  double want = h.weight(0) + h.weight(hawaiian_index(res, 1, res / 2));
  for (std::size_t k = 2; k <= n; ++k) {
    for (std::size_t j = 1; j < res; ++j) want += h.weight(hawaiian_index(res, k, j));
  }
  EXPECT_NEAR(fix.measure, want, 1e-12);
  EXPECT_NEAR(fixed_mass_in_ball(h, fix, 0, 100.0), want, 1e-12);
}

TEST(Displacement, MatchesDirectMaximum) {
  const std::size_t n = 3;
  const std::size_t res = 24;
  const auto h = hawaiian_truncation(n, res);
  const auto g = generate_subgroup({hawaiian_reflection(n, res, 2), hawaiian_reflection(n, res, 3)});
  for (double r : {0.05, 0.2, 0.6, 2.0, 10.0}) {
    double want = 0.0;
    for (std::size_t y : ball_indices(h, 0, r / 2, BallKind::kOpen)) {
      for (const auto& e : g.elements) want = std::max(want, h.d(y, e[y]));
    }
    EXPECT_NEAR(displacement(h, g, r, 0), want, 1e-15) << r;
  }
}

TEST(Probe, FindsReflectionOfTheSmallestCircle) {
  const auto h = hawaiian_truncation(5, 16);
  std::vector<std::size_t> K(h.size());
  for (std::size_t i = 0; i < K.size(); ++i) K[i] = i;
  const auto r = small_subgroup_probe(h, 0.2, K);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.group.elements.size(), 2u);
  EXPECT_LT(r.group_displacement, 0.2);
  EXPECT_NEAR(r.group_displacement, kPi / 25.0, 1e-12);
}

TEST(Probe, RigidSpacesHaveNoCandidates) {
  std::mt19937_64 rng(5);
  const auto s = testing::random_planar(rng, 7);
  std::vector<std::size_t> K = {0, 1, 2, 3, 4, 5, 6};
  const auto r = small_subgroup_probe(s, 10.0, K);
  EXPECT_FALSE(r.found);
  EXPECT_EQ(r.candidates, 0u);
}

TEST(ConditionA, GapIsTheSmallestCircleOnHawaiian) {
  const std::size_t n = 3;
  const std::size_t res = 32;
  const auto h = hawaiian_truncation(n, res);
  const auto r = condition_a_scan(h, 0, 2.0 * h.diameter());
  EXPECT_TRUE(r.complete);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.ball_mass, h.total_mass(), 1e-12);
  // The reflection of circle 3 fixes everything except that circle, up to
  // the cells within one pitch of its fixed points.
  const double circle = 2.0 * kPi / 9.0;
  EXPECT_NEAR(r.gap, circle, 3.0 * circle / res);
}

TEST(SupAffineNorm, DominatesAndApproachesSampling) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 60; ++rep) {
    const int k = 2 + rep % 2;
    Eigen::MatrixXd A(k, k);
    Eigen::VectorXd w(k);
    for (int i = 0; i < k; ++i) {
      w(i) = normal(rng);
      for (int j = 0; j < k; ++j) A(i, j) = normal(rng);
    }
    if (rep % 5 == 0) A.col(0).setZero();  // rank deficient
    const double radius = 0.5;
    const double sup = sup_affine_norm(A, w, radius);
    double sampled = 0.0;
    const int steps = k == 2 ? 20000 : 300;
    for (int a = 0; a < steps; ++a) {
      const double th = 2.0 * kPi * a / steps;
      if (k == 2) {
        Eigen::Vector2d y(std::cos(th), std::sin(th));
        sampled = std::max(sampled, (A * (radius * y) + w).norm());
      } else {
        for (int b = 0; b <= steps / 2; ++b) {
          const double ph = kPi * b / (steps / 2);
          Eigen::Vector3d y(std::sin(ph) * std::cos(th), std::sin(ph) * std::sin(th), std::cos(ph));
          sampled = std::max(sampled, (A * (radius * y) + w).norm());
        }
      }
    }
    EXPECT_GE(sup, sampled - 1e-12) << rep;
    const double grid_err = A.norm() * radius * (k == 2 ? 2e-3 : 2.5e-2);
    EXPECT_LE(sup, sampled + grid_err) << rep;
  }
}

TEST(Escape, RotationMatchesClosedForm) {
  // Rotation by theta about the origin: sup_{|y| <= 1/2} |g^n y - y| = |sin(n theta / 2)|.
  for (double theta : {0.003, 0.01, 0.07}) {
    EuclideanIsometry g{Eigen::Rotation2Dd(theta).toRotationMatrix(), Eigen::Vector2d::Zero()};
    std::size_t n = 1;
    while (std::abs(std::sin(n * theta / 2)) < 0.05) ++n;
    const auto r = euclidean_power_escape(g, 0.05);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.n, n);
    EXPECT_NEAR(r.displacement, std::abs(std::sin(n * theta / 2)), 1e-9);
    EXPECT_NEAR(power_displacement(g, 7), std::abs(std::sin(7 * theta / 2)), 1e-12);
  }
}

TEST(Escape, IdentityIsRejected) {
  EuclideanIsometry g{Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero()};
  EXPECT_THROW(euclidean_power_escape(g, 0.05, 1000), Error);
}

TEST(Escape, RandomSamplesRespectTheWindow) {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 100; ++rep) {
    const auto g = random_small_isometry(rng, 2 + rep % 2, 1e-4, 1e-2);
    const double d = power_displacement(g, 1);
    EXPECT_GT(d, 1e-4);
    EXPECT_LT(d, 1e-2);
    EXPECT_LT((g.Q.transpose() * g.Q - Eigen::MatrixXd::Identity(g.Q.rows(), g.Q.rows())).norm(),
              1e-12);
  }
}

TEST(CriticalScale, BracketsTheTwentiethCrossing) {
  const std::size_t n = 3;
  const std::size_t res = 32;
  const auto h = hawaiian_truncation(n, res);
  const auto g = generate_subgroup({hawaiian_reflection(n, res, 3)});
  const auto c = critical_scale(h, g, 0, 0.1, 10.0, 1e-6);
  ASSERT_TRUE(c.found);
  EXPECT_LE(c.hi - c.lo, 1e-6);
  EXPECT_GE(displacement(h, g, c.lo, 0), c.lo / 20.0);
  EXPECT_LT(displacement(h, g, c.hi, 0), c.hi / 20.0);
  EXPECT_FALSE(critical_scale(h, g, 0, 9.0, 10.0, 1e-6).found);
}

TEST(LargeFix, SmallMovedMassGivesSmallDisplacement) {
  const std::size_t n = 4;
  const std::size_t res = 32;
  const auto h = hawaiian_truncation(n, res);
  const auto r = large_fix_implies_small_displacement(h, hawaiian_reflection(n, res, 4), 0, 2);
  EXPECT_TRUE(r.implication_holds);
  if (r.hypothesis) EXPECT_TRUE(r.conclusion);
}

}  // namespace
}  // namespace mmslab
