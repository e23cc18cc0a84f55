#include <gtest/gtest.h>

#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "mmslab/error.hpp"
#include "mmslab/space.hpp"
#include "mmslab/space_io.hpp"
#include "test_support.hpp"

namespace mmslab {
namespace {

using testing::from_matrix;
using testing::random_planar;

TEST(Space, RejectsMismatchedMatrix) {
  EXPECT_THROW(FiniteMMS({}, std::vector<double>(3, 0.0), {1.0, 1.0}, {}), Error);
}

TEST(Space, ValidateFlagsTriangleViolation) {
  const FiniteMMS s = from_matrix({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
  const auto diag = validate_space(s);
  EXPECT_FALSE(diag.ok());
  EXPECT_NEAR(diag.worst_triangle_defect, 3.0, 1e-12);
  bool triangle = false;
  for (const auto& v : diag.violations) triangle = triangle || v.kind == Violation::Kind::kTriangle;
  EXPECT_TRUE(triangle);
}

TEST(Space, ValidateFlagsAsymmetryAndWeights) {
  const FiniteMMS s = from_matrix({{0, 1}, {2, 0}}, {1.0, 0.0});
  const auto diag = validate_space(s);
  std::size_t asym = 0;
  std::size_t weight = 0;
  for (const auto& v : diag.violations) {
    asym += v.kind == Violation::Kind::kAsymmetry;
    weight += v.kind == Violation::Kind::kNonPositiveWeight;
  }
  EXPECT_EQ(asym, 1u);
  EXPECT_EQ(weight, 1u);
}

TEST(Space, RandomEuclideanCloudsAreValid) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto s = random_planar(rng, 2 + rep % 9);
    EXPECT_TRUE(validate_space(s).ok()) << "rep " << rep;
  }
}

TEST(Space, ScaleDividesDistancesAndPitch) {
  std::mt19937_64 rng(3);
  FiniteMMS s = random_planar(rng, 6);
  Provenance meta;
  meta.pitch = 0.5;
  s = FiniteMMS(std::vector<PointRecord>(s.points().begin(), s.points().end()),
                std::vector<double>(s.distances().begin(), s.distances().end()),
                std::vector<double>(s.weights().begin(), s.weights().end()), meta);
  const FiniteMMS t = scale(scale(s, 2.0), 3.0);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(t.d(i, j), s.d(i, j) / 6.0, 1e-15);
  }
  EXPECT_NEAR(t.meta().pitch, 0.5 / 6.0, 1e-15);
  EXPECT_NEAR(t.meta().params.at("scale_factor"), 6.0, 1e-15);
  EXPECT_THROW(scale(s, 0.0), Error);
}

TEST(Space, OpenAndClosedBallsDifferOnTheSphere) {
  const FiniteMMS s = from_matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  EXPECT_EQ(ball_indices(s, 0, 1.0, BallKind::kClosed), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(ball_indices(s, 0, 1.0, BallKind::kOpen), (std::vector<std::size_t>{0}));
  EXPECT_THROW(ball_indices(s, 0, 0.0, BallKind::kOpen), Error);
}

TEST(Space, RestrictionKeepsIdsAndDistances) {
  std::mt19937_64 rng(11);
  const auto s = random_planar(rng, 8);
  const std::vector<std::size_t> idx = {6, 2, 5};
  const auto r = restrict_to(s, idx);
  ASSERT_EQ(r.size(), 3u);
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_EQ(r.point(a).id, static_cast<int>(idx[a]));
    EXPECT_EQ(r.weight(a), s.weight(idx[a]));
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(r.d(a, b), s.d(idx[a], idx[b]));
  }
}

TEST(Space, EffectivePitchFallsBackToNearestNeighbours) {
  const FiniteMMS s = from_matrix({{0, 1, 3}, {1, 0, 2}, {3, 2, 0}});
  EXPECT_EQ(nearest_neighbor_distances(s), (std::vector<double>{1, 1, 2}));
  EXPECT_EQ(effective_pitch(s), 2.0);
}

TEST(SpaceIO, RoundTripIsExact) {
  std::mt19937_64 rng(5);
  const auto s = random_planar(rng, 7);
  const auto t = space_from_json(space_to_json(s));
  ASSERT_EQ(t.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(t.weight(i), s.weight(i));
    EXPECT_EQ(t.point(i).coords, s.point(i).coords);
    for (std::size_t j = 0; j < s.size(); ++j) EXPECT_EQ(t.d(i, j), s.d(i, j));
  }
}

TEST(SpaceIO, AmbientModes) {
  const std::string text = R"({"points":[{"coords":[0,0]},{"coords":[3,4]}],
    "dist":{"mode":"MODE"},"weights":[1,1]})";
  auto with = [&](const std::string& mode) {
    std::string t = text;
    t.replace(t.find("MODE"), 4, mode);
    return space_from_json(t);
  };
  EXPECT_DOUBLE_EQ(with("ambient-L2").d(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(with("ambient-Linf").d(0, 1), 4.0);
}

// Graph mode against Floyd-Warshall on random connected graphs.
TEST(SpaceIO, GraphModeMatchesFloydWarshall) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> len(0.1, 2.0);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 2 + rep % 10;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> fw(n, std::vector<double>(n, inf));
    std::ostringstream edges;
    edges << std::setprecision(17);
    bool first = true;
    auto add = [&](std::size_t i, std::size_t j, double w) {
      fw[i][j] = fw[j][i] = std::min(fw[i][j], w);
      edges << (first ? "" : ",") << "[" << i << "," << j << "," << w << "]";
      first = false;
    };
    for (std::size_t i = 1; i < n; ++i) add(i, rng() % i, len(rng));
    for (std::size_t e = 0; e < n; ++e) add(rng() % n, rng() % n, len(rng));
    for (std::size_t i = 0; i < n; ++i) fw[i][i] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) fw[i][j] = std::min(fw[i][j], fw[i][k] + fw[k][j]);
      }
    }
    std::ostringstream doc;
    doc << R"({"dist":{"mode":"graph","edges":[)" << edges.str() << "]},\"weights\":[";
    for (std::size_t i = 0; i < n; ++i) doc << (i ? "," : "") << 1;
    doc << "]}";
    const auto s = space_from_json(doc.str());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(s.d(i, j), fw[i][j], 1e-12);
    }
  }
}

TEST(SpaceIO, DisconnectedGraphIsReported) {
  try {
    space_from_json(R"({"dist":{"mode":"graph","edges":[[0,1,1]]},"weights":[1,1,1]})");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDisconnected);
  }
}

TEST(SpaceIO, MalformedInputIsAFormatError) {
  for (const char* text : {"{", R"({"dist":[[0]]})", R"({"dist":[[0,1]],"weights":[1]})",
                           R"({"dist":{"mode":"nope"},"weights":[1]})"}) {
    try {
      space_from_json(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kFormat) << text;
    }
  }
}

}  // namespace
}  // namespace mmslab
