#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <queue>

#include "mmslab/error.hpp"
#include "mmslab/generators.hpp"
#include "mmslab/symmetry.hpp"

namespace mmslab {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Segment, MassIsTheCosineSquaredIntegral) {
  for (double h : {kPi / 50, kPi / 200, kPi / 800}) {
    const auto s = segment_space(h);
    // Midpoint rule error for cos^2 is below (pi/2) h^2 / 12.
    EXPECT_NEAR(s.total_mass(), kPi / 4.0, kPi / 2.0 * h * h / 12.0 + 1e-14) << h;
    EXPECT_NEAR(s.diameter(), kPi / 2.0 - effective_pitch(s), 1e-12);
    EXPECT_TRUE(validate_space(s).ok());
  }
}

TEST(Circle, ArcLengthMetric) {
  const auto c = circle_space(2.0, 12);
  EXPECT_NEAR(c.d(0, 6), 2.0 * kPi, 1e-12);
  EXPECT_NEAR(c.d(1, 11), 2.0 * 2.0 * kPi / 6.0, 1e-12);
  EXPECT_NEAR(c.total_mass(), 4.0 * kPi, 1e-12);
  EXPECT_THROW(circle_space(1.0, 2), Error);
}

TEST(Hawaiian, SizeMassAndMetric) {
  const std::size_t n = 4;
  const std::size_t res = 16;
  const auto h = hawaiian_truncation(n, res);
  ASSERT_EQ(h.size(), 1 + n * (res - 1));
  double mass = 0.0;
  for (std::size_t k = 1; k <= n; ++k) mass += 2.0 * kPi / static_cast<double>(k * k);
  EXPECT_NEAR(h.total_mass(), mass, 1e-12);
  // Antipode on circle k sits at half its circumference.
  for (std::size_t k = 1; k <= n; ++k) {
    const double R = 1.0 / static_cast<double>(k * k);
    EXPECT_NEAR(h.d(0, hawaiian_index(res, k, res / 2)), kPi * R, 1e-12);
  }
  // Different circles meet only at the base point.
  const std::size_t a = hawaiian_index(res, 1, 3);
  const std::size_t b = hawaiian_index(res, 2, 5);
  EXPECT_NEAR(h.d(a, b), h.d(a, 0) + h.d(0, b), 1e-12);
  EXPECT_TRUE(validate_space(h).ok());
}

TEST(Hawaiian, ReflectionsAreCommutingInvolutiveIsometries) {
  const std::size_t n = 3;
  const std::size_t res = 12;
  const auto h = hawaiian_truncation(n, res);
  std::vector<Permutation> refl;
  for (std::size_t k = 1; k <= n; ++k) {
    refl.push_back(hawaiian_reflection(n, res, k));
    const auto m = make_isometry(h, refl.back());
    EXPECT_EQ(m.distortion, 0.0);
    EXPECT_TRUE(m.measure_preserving);
    EXPECT_TRUE(is_identity(compose(refl.back(), refl.back())));
  }
  EXPECT_EQ(compose(refl[0], refl[2]), compose(refl[2], refl[0]));
}

TEST(Necklace, ParameterChecks) {
  EXPECT_THROW(necklace({{{0.4, 0.3}, {0.45, 0.3}}, 0.01, 8}), Error);  // overlap
  EXPECT_THROW(necklace({{{0.01, 0.3}}, 0.01, 8}), Error);              // leaves [0, pi/2]
  EXPECT_THROW(necklace({{{0.4, 1.5}}, 0.01, 8}), Error);               // size
  EXPECT_NO_THROW(necklace({{{0.4, 0.3}, {1.1, 0.3}}, 0.05, 8}));
}

TEST(Necklace, LayoutRoundTripAndFiberMass) {
  const NecklaceParams p{{{0.4, 0.3}, {1.1, 0.3}}, kPi / 200, 8};
  const auto s = necklace(p);
  const auto layout = necklace_layout(s);
  ASSERT_EQ(layout.cells.size(), s.size());
  EXPECT_NEAR(s.total_mass(), kPi / 4.0, 1e-3);
  for (const auto& fibers : layout.fibers) {
    for (const auto& f : fibers) {
      double m = 0.0;
      for (std::size_t c : f.cells) m += s.weight(c);
      const double cx = std::cos(f.x);
      EXPECT_NEAR(m, cx * cx * layout.cells[f.cells[0]].dx, 1e-15);
      EXPECT_NEAR(f.half_height, diamond_half_height(p.beads[layout.cells[f.cells[0]].bead], f.x),
                  1e-15);
    }
  }
}

// Intrinsic L-infinity distances against shortest paths that only use
// local moves: along the segment, within a fiber, between adjacent fibers
// and through the diamond vertices.
TEST(Necklace, MetricMatchesLocalShortestPaths) {
  const NecklaceParams p{{{0.5, 0.4}}, kPi / 120, 6};
  const auto s = necklace(p);
  const auto L = necklace_layout(s);
  const std::size_t n = s.size();
  const Bead& bead = p.beads[0];
  const std::size_t left = n;       // vertex nodes
  const std::size_t right = n + 1;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n + 2);
  auto edge = [&](std::size_t a, std::size_t b, double w) {
    adj[a].push_back({b, w});
    adj[b].push_back({a, w});
  };
  auto linf = [&](std::size_t a, std::size_t b) {
    return std::max(std::abs(L.cells[a].x - L.cells[b].x), std::abs(L.cells[a].y - L.cells[b].y));
  };
  const double lo = bead.x - bead.r / 4.0;
  const double hi = bead.x + bead.r / 4.0;
  std::vector<std::size_t> seg_left;
  std::vector<std::size_t> seg_right;
  for (std::size_t c : L.segment_cells) (L.cells[c].x < bead.x ? seg_left : seg_right).push_back(c);
  for (std::size_t i = 0; i + 1 < seg_left.size(); ++i) edge(seg_left[i], seg_left[i + 1], linf(seg_left[i], seg_left[i + 1]));
  for (std::size_t i = 0; i + 1 < seg_right.size(); ++i) edge(seg_right[i], seg_right[i + 1], linf(seg_right[i], seg_right[i + 1]));
  edge(seg_left.back(), left, lo - L.cells[seg_left.back()].x);
  edge(seg_right.front(), right, L.cells[seg_right.front()].x - hi);
  const auto& fibers = L.fibers[0];
  for (std::size_t f = 0; f < fibers.size(); ++f) {
    const auto& cells = fibers[f].cells;
    for (std::size_t j = 0; j + 1 < cells.size(); ++j) edge(cells[j], cells[j + 1], linf(cells[j], cells[j + 1]));
    if (f + 1 < fibers.size()) {
      for (std::size_t a : cells) {
        for (std::size_t b : fibers[f + 1].cells) edge(a, b, linf(a, b));
      }
    }
  }
  for (std::size_t c : fibers.front().cells) edge(c, left, std::max(L.cells[c].x - lo, std::abs(L.cells[c].y)));
  for (std::size_t c : fibers.back().cells) edge(c, right, std::max(hi - L.cells[c].x, std::abs(L.cells[c].y)));

  double max_dy = 0.0;
  for (const auto& c : L.cells) max_dy = std::max(max_dy, c.dy);
  for (std::size_t src = 0; src < n; src += 3) {
    std::vector<double> dist(n + 2, 1e300);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
      const auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (const auto& [v, w] : adj[u]) {
        if (d + w < dist[v]) {
          dist[v] = d + w;
          pq.push({dist[v], v});
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) {
      EXPECT_GE(dist[t], s.d(src, t) - 1e-12) << src << "->" << t;
      EXPECT_LE(dist[t], s.d(src, t) + 2.0 * max_dy + 1e-12) << src << "->" << t;
    }
  }
}

TEST(EuclideanBallGrid, LatticeCount) {
  const auto b = euclidean_ball_grid(2, 1.0, 0.25);
  std::size_t count = 0;
  for (int i = -4; i <= 4; ++i) {
    for (int j = -4; j <= 4; ++j) count += i * i + j * j <= 16;
  }
  EXPECT_EQ(b.size(), count);
  EXPECT_EQ(euclidean_ball_grid(1, 1.0, 0.1).size(), 21u);
  EXPECT_NEAR(b.weight(0), 0.0625, 1e-15);
  EXPECT_THROW(euclidean_ball_grid(4, 1.0, 0.1), Error);
}

}  // namespace
}  // namespace mmslab
