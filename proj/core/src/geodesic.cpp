#include "mmslab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mmslab/error.hpp"

namespace mmslab {
namespace {

constexpr double kTieTol = 1e-12;

}  // namespace

bool operator==(const DiscreteGeodesic& a, const DiscreteGeodesic& b) {
  return a.nodes == b.nodes && a.times == b.times && a.length == b.length;
}

double default_geodesic_tol(const FiniteMMS& space) { return 2.0 * effective_pitch(space); }

double constant_speed_defect(const FiniteMMS& space, const DiscreteGeodesic& g) {
  double worst = 0.0;
  for (std::size_t a = 0; a < g.nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < g.nodes.size(); ++b) {
      const double expected = (g.times[b] - g.times[a]) * g.length;
      worst = std::max(worst, std::abs(space.d(g.nodes[a], g.nodes[b]) - expected));
    }
  }
  return worst;
}

std::size_t evaluate_position(const DiscreteGeodesic& g, double t) {
  require(!g.nodes.empty(), "geodesic has no nodes");
  require(t >= 0.0 && t <= 1.0, "evaluation time outside [0,1]");
  // times are sorted: the nearest node is next to the insertion point.
  const auto it = std::lower_bound(g.times.begin(), g.times.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - g.times.begin());
  if (hi == g.times.size()) return g.times.size() - 1;
  if (hi == 0) return 0;
  const std::size_t lo = hi - 1;
  return (t - g.times[lo]) <= (g.times[hi] - t) + kTieTol ? lo : hi;
}

std::size_t evaluate(const DiscreteGeodesic& g, double t) {
  return g.nodes[evaluate_position(g, t)];
}

DiscreteGeodesic trivial_geodesic(std::size_t p) { return {{p, p}, {0.0, 1.0}, 0.0}; }

DiscreteGeodesic restrict(const DiscreteGeodesic& g, double s, double t) {
  require(0.0 <= s && s < t && t <= 1.0, "restriction window must satisfy 0 <= s < t <= 1");
  const std::size_t ps = evaluate_position(g, s);
  const std::size_t pt = evaluate_position(g, t);
  if (ps >= pt) return trivial_geodesic(g.nodes[ps]);
  DiscreteGeodesic out;
  const double t0 = g.times[ps];
  const double span = g.times[pt] - t0;
  for (std::size_t p = ps; p <= pt; ++p) {
    out.nodes.push_back(g.nodes[p]);
    out.times.push_back((g.times[p] - t0) / span);
  }
  out.times.front() = 0.0;
  out.times.back() = 1.0;
  out.length = span * g.length;
  return out;
}

GeodesicFinder::GeodesicFinder(const FiniteMMS& space, GeodesicOptions options)
    : space_(&space),
      tol_(options.tol > 0.0 ? options.tol : default_geodesic_tol(space)),
      neighbors_(space.size()) {
  const std::size_t n = space.size();
  const auto nn = nearest_neighbor_distances(space);
  // Anisotropic cells (thin diamond fibers) have nearest neighbors far below
  // the pitch, so the recorded pitch is a floor for the local scale.
  const double floor = space.meta().pitch;
  for (std::size_t u = 0; u < n; ++u) {
    const auto row = space.row(u);
    for (std::size_t v = 0; v < n; ++v) {
      const double local = std::max({nn[u], nn[v], floor});
      if (v != u && row[v] <= options.edge_factor * local * (1 + 1e-12)) {
        neighbors_[u].push_back(v);
      }
    }
    std::sort(neighbors_[u].begin(), neighbors_[u].end(), [&](std::size_t x, std::size_t y) {
      return row[x] != row[y] ? row[x] < row[y] : x < y;
    });
  }
}

std::vector<DiscreteGeodesic> GeodesicFinder::between(std::size_t a, std::size_t b,
                                                      std::size_t budget) const {
  const FiniteMMS& sp = *space_;
  require(a < sp.size() && b < sp.size(), "geodesic endpoint out of range");
  require(budget > 0, "geodesic budget must be positive");
  if (a == b) return {trivial_geodesic(a)};

  const double L = sp.d(a, b);
  const auto da = sp.row(a);
  const auto db = sp.row(b);
  const double step_eps = kTieTol * std::max(1.0, L);

  std::vector<std::size_t> cand;
  std::vector<char> is_cand(sp.size(), 0);
  for (std::size_t v = 0; v < sp.size(); ++v) {
    if (da[v] + db[v] <= L + tol_) {
      cand.push_back(v);
      is_cand[v] = 1;
    }
  }
  std::sort(cand.begin(), cand.end(), [&](std::size_t x, std::size_t y) {
    return da[x] != da[y] ? da[x] < da[y] : x < y;
  });

  // Successors in the forward DAG, kept only if b stays reachable.
  std::vector<std::vector<std::size_t>> succ(sp.size());
  std::vector<char> reach(sp.size(), 0);
  reach[b] = 1;
  for (auto it = cand.rbegin(); it != cand.rend(); ++it) {
    const std::size_t u = *it;
    if (u == b) continue;
    for (std::size_t v : neighbors_[u]) {
      if (!is_cand[v] || !reach[v] || da[v] <= da[u] + step_eps) continue;
      if (da[u] + sp.d(u, v) + db[v] > L + tol_) continue;
      succ[u].push_back(v);
    }
    reach[u] = !succ[u].empty();
  }
  if (!reach[a]) {
    fail(ErrorCode::kDisconnected, "no chain joins " + std::to_string(a) + " and " +
                                       std::to_string(b) + " in the neighbor graph");
  }

  std::vector<DiscreteGeodesic> out;
  const std::size_t max_attempts = 64 * budget + 64;
  std::size_t attempts = 0;
  std::vector<std::size_t> path{a};
  std::vector<std::size_t> cursor{0};
  while (!path.empty() && out.size() < budget && attempts < max_attempts) {
    const std::size_t u = path.back();
    if (u == b) {
      ++attempts;
      DiscreteGeodesic g;
      g.nodes = path;
      g.length = L;
      g.times.reserve(path.size());
      for (std::size_t v : path) g.times.push_back(da[v] / L);
      g.times.front() = 0.0;
      g.times.back() = 1.0;
      if (constant_speed_defect(sp, g) <= tol_) out.push_back(std::move(g));
      path.pop_back();
      cursor.pop_back();
      continue;
    }
    std::size_t& c = cursor.back();
    if (c < succ[u].size()) {
      path.push_back(succ[u][c++]);
      cursor.push_back(0);
    } else {
      path.pop_back();
      cursor.pop_back();
    }
  }
  if (out.empty()) {
    fail(ErrorCode::kDisconnected, "no constant-speed chain joins " + std::to_string(a) +
                                       " and " + std::to_string(b));
  }
  return out;
}

std::vector<DiscreteGeodesic> geodesics_between(const FiniteMMS& space, std::size_t a,
                                                std::size_t b, std::size_t budget,
                                                GeodesicOptions options) {
  return GeodesicFinder(space, options).between(a, b, budget);
}

}  // namespace mmslab
