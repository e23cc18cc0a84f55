#include "mmslab/transport.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "mmslab/error.hpp"
#include "transport_simplex.hpp"

namespace mmslab {
namespace {

detail::TransportProblem make_problem(const FiniteMMS& space, const Measure& a,
                                      const Measure& b) {
  detail::TransportProblem p;
  p.m = a.points.size();
  p.n = b.points.size();
  p.supply = a.mass;
  p.demand = b.mass;
  p.cost.resize(p.m * p.n);
  for (std::size_t i = 0; i < p.m; ++i) {
    for (std::size_t j = 0; j < p.n; ++j) {
      const double d = space.d(a.points[i], b.points[j]);
      p.cost[i * p.n + j] = d * d;
    }
  }
  return p;
}

// Canonical supports with the target rescaled to the source's total mass.
std::pair<Measure, Measure> balanced_pair(const FiniteMMS& space, const Measure& mu0,
                                          const Measure& mu1) {
  Measure a = canonical(mu0);
  Measure b = canonical(mu1);
  require(!a.points.empty() && !b.points.empty(), "measures must have nonempty support");
  for (std::size_t p : a.points) require(p < space.size(), "source atom outside the space");
  for (std::size_t p : b.points) require(p < space.size(), "target atom outside the space");
  const double ta = a.total();
  const double tb = b.total();
  require(std::abs(ta - tb) <= 1e-9 * std::max(1.0, ta), "measures have unequal total mass");
  for (double& v : b.mass) v *= ta / tb;
  return {std::move(a), std::move(b)};
}

Coupling make_coupling(const FiniteMMS& space, const Measure& a, const Measure& b,
                       const std::vector<double>& flow) {
  Coupling c;
  c.source = a;
  c.target = b;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    for (std::size_t j = 0; j < b.points.size(); ++j) {
      const double f = flow[i * b.points.size() + j];
      if (f > 0.0) c.entries.push_back({a.points[i], b.points[j], f});
    }
  }
  c.cost = coupling_cost(space, c.entries);
  return c;
}

double isometry_tol(const FiniteMMS& space) {
  return 1e-9 * std::max(1.0, space.diameter());
}

}  // namespace

double Measure::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

std::vector<double> Measure::dense(std::size_t n) const {
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < points.size(); ++k) {
    require(points[k] < n, "measure atom outside the space");
    out[points[k]] += mass[k];
  }
  return out;
}

Measure canonical(const Measure& mu) {
  require(mu.points.size() == mu.mass.size(), "measure points and masses differ in length");
  std::map<std::size_t, double> merged;
  for (std::size_t k = 0; k < mu.points.size(); ++k) {
    require(std::isfinite(mu.mass[k]) && mu.mass[k] >= 0.0,
            "measure masses must be finite and nonnegative");
    merged[mu.points[k]] += mu.mass[k];
  }
  Measure out;
  for (const auto& [p, w] : merged) {
    if (w > 0.0) {
      out.points.push_back(p);
      out.mass.push_back(w);
    }
  }
  return out;
}

Measure dirac(std::size_t p, double mass) { return {{p}, {mass}}; }

Measure normalized_restriction(const FiniteMMS& space, const std::vector<std::size_t>& points) {
  require(!points.empty(), "cannot normalize the measure of an empty set");
  Measure mu;
  double total = 0.0;
  for (std::size_t p : points) {
    require(p < space.size(), "point outside the space");
    total += space.weight(p);
  }
  for (std::size_t p : points) {
    mu.points.push_back(p);
    mu.mass.push_back(space.weight(p) / total);
  }
  return canonical(mu);
}

Measure from_dense(const std::vector<double>& masses, double threshold) {
  Measure mu;
  for (std::size_t p = 0; p < masses.size(); ++p) {
    if (masses[p] > threshold) {
      mu.points.push_back(p);
      mu.mass.push_back(masses[p]);
    }
  }
  return mu;
}

double marginal_residual(const Coupling& coupling) {
  std::map<std::size_t, double> rows;
  std::map<std::size_t, double> cols;
  for (std::size_t k = 0; k < coupling.source.points.size(); ++k) {
    rows[coupling.source.points[k]] += coupling.source.mass[k];
  }
  for (std::size_t k = 0; k < coupling.target.points.size(); ++k) {
    cols[coupling.target.points[k]] += coupling.target.mass[k];
  }
  for (const auto& e : coupling.entries) {
    rows[e.i] -= e.mass;
    cols[e.j] -= e.mass;
  }
  double worst = 0.0;
  for (const auto& [p, r] : rows) worst = std::max(worst, std::abs(r));
  for (const auto& [p, r] : cols) worst = std::max(worst, std::abs(r));
  return worst;
}

double coupling_cost(const FiniteMMS& space, const std::vector<CouplingEntry>& entries) {
  double cost = 0.0;
  for (const auto& e : entries) {
    const double d = space.d(e.i, e.j);
    cost += e.mass * d * d;
  }
  return cost;
}

W2Result solve_w2(const FiniteMMS& space, const Measure& mu0, const Measure& mu1) {
  const auto [a, b] = balanced_pair(space, mu0, mu1);
  const auto sol = detail::solve_transport(make_problem(space, a, b));
  W2Result result;
  result.coupling = make_coupling(space, a, b, sol.flow);
  result.cost = result.coupling.cost;
  return result;
}

double brute_force_w2(const FiniteMMS& space, const Measure& mu0, const Measure& mu1) {
  const auto [a, b] = balanced_pair(space, mu0, mu1);
  const std::size_t m = a.points.size();
  const std::size_t n = b.points.size();
  if (m > 5 || n > 5) fail(ErrorCode::kBudgetExceeded, "brute force supports at most 5x5");
  const auto problem = make_problem(space, a, b);
  const std::size_t need = m + n - 1;
  const std::size_t cells = m * n;
  const double neg_tol = 1e-12 * std::max(1.0, a.total());

  // Union-find with rollback over the m + n bipartite nodes.
  std::vector<std::size_t> parent(m + n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  auto visit = [&](auto&& self, std::size_t next) -> void {
    if (chosen.size() == need) {
      // Flows of a spanning tree follow from peeling leaves; fixed-size
      // arrays keep this independent of the simplex code and allocation free.
      std::array<double, 10> rem{};
      std::array<int, 10> degree{};
      std::array<bool, 9> used{};
      for (std::size_t i = 0; i < m; ++i) rem[i] = a.mass[i];
      for (std::size_t j = 0; j < n; ++j) rem[m + j] = b.mass[j];
      for (const auto& [i, j] : chosen) {
        ++degree[i];
        ++degree[m + j];
      }
      double cost = 0.0;
      for (std::size_t step = 0; step < need; ++step) {
        for (std::size_t k = 0; k < need; ++k) {
          if (used[k]) continue;
          const std::size_t u = chosen[k].first;
          const std::size_t v = m + chosen[k].second;
          const std::size_t leaf = degree[u] == 1 ? u : (degree[v] == 1 ? v : m + n);
          if (leaf == m + n) continue;
          const std::size_t other = leaf == u ? v : u;
          const double flow = rem[leaf];
          if (flow < -neg_tol) return;
          cost += flow * problem.cost[chosen[k].first * n + chosen[k].second];
          rem[other] -= flow;
          rem[leaf] = 0.0;
          --degree[u];
          --degree[v];
          used[k] = true;
          break;
        }
      }
      best = std::min(best, cost);
      return;
    }
    if (next == cells || chosen.size() + (cells - next) < need) return;
    const std::size_t i = next / n;
    const std::size_t j = next % n;
    const std::size_t ri = find(i);
    const std::size_t rj = find(m + j);
    if (ri != rj) {
      parent[ri] = rj;
      chosen.emplace_back(i, j);
      self(self, next + 1);
      chosen.pop_back();
      parent[ri] = ri;
    }
    self(self, next + 1);
  };
  visit(visit, 0);
  return best;
}

double GeodesicPlan::total_mass() const {
  double total = 0.0;
  for (const auto& a : atoms) total += a.mass;
  return total;
}

std::vector<CouplingEntry> endpoint_coupling(const GeodesicPlan& plan) {
  std::map<std::pair<std::size_t, std::size_t>, double> agg;
  for (const auto& a : plan.atoms) agg[{a.geodesic.front(), a.geodesic.back()}] += a.mass;
  std::vector<CouplingEntry> out;
  for (const auto& [key, mass] : agg) out.push_back({key.first, key.second, mass});
  return out;
}

GeodesicPlan lift_to_geodesic_plan(const FiniteMMS& space, const Coupling& coupling,
                                   std::size_t budget, GeodesicOptions options) {
  const GeodesicFinder finder(space, options);
  GeodesicPlan plan;
  for (const auto& e : coupling.entries) {
    if (e.mass <= 0.0) continue;
    plan.atoms.push_back({finder.between(e.i, e.j, budget).front(), e.mass});
  }
  return plan;
}

std::vector<double> pushforward_at(const GeodesicPlan& plan, double t, const FiniteMMS& space,
                                   PushforwardMode mode) {
  require(t >= 0.0 && t <= 1.0, "pushforward time outside [0,1]");
  std::vector<double> out(space.size(), 0.0);
  for (const auto& atom : plan.atoms) {
    const DiscreteGeodesic& g = atom.geodesic;
    if (mode == PushforwardMode::kNearest) {
      out[evaluate(g, t)] += atom.mass;
      continue;
    }
    const auto it = std::upper_bound(g.times.begin(), g.times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - g.times.begin());
    if (hi == g.times.size()) {
      out[g.nodes.back()] += atom.mass;
      continue;
    }
    const std::size_t lo = hi - 1;
    const double lambda = (t - g.times[lo]) / (g.times[hi] - g.times[lo]);
    out[g.nodes[lo]] += (1.0 - lambda) * atom.mass;
    out[g.nodes[hi]] += lambda * atom.mass;
  }
  return out;
}

UniquenessVerdict uniqueness_probe(const FiniteMMS& space, const Measure& mu0,
                                   const Measure& mu1, double tol) {
  const auto [a, b] = balanced_pair(space, mu0, mu1);
  auto problem = make_problem(space, a, b);
  const auto first = detail::solve_transport(problem);

  UniquenessVerdict verdict;
  verdict.first = make_coupling(space, a, b, first.flow);
  verdict.optimal_cost = verdict.first.cost;

  const std::size_t m = problem.m;
  const std::size_t n = problem.n;
  double scale = 0.0;
  for (double c : problem.cost) scale = std::max(scale, c);
  const double tight_tol = 1e-9 * (1.0 + scale);

  detail::TransportProblem face = problem;
  face.forbidden.assign(m * n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t c = i * n + j;
      const double rc = problem.cost[c] - first.u[i] - first.v[j];
      face.forbidden[c] = rc > tight_tol;
      face.cost[c] = first.flow[c] > 0.0 ? 1.0 : 0.0;
    }
  }
  const auto second = detail::solve_transport(face);

  double distance = 0.0;
  for (std::size_t c = 0; c < m * n; ++c) {
    distance = std::max(distance, std::abs(second.flow[c] - first.flow[c]));
  }
  verdict.witness_distance = distance;
  if (distance > tol) {
    verdict.unique = false;
    verdict.witness = make_coupling(space, a, b, second.flow);
    verdict.witness_cost_gap = std::abs(verdict.witness->cost - verdict.optimal_cost);
  }
  return verdict;
}

bool is_induced_by_map(const Coupling& coupling, double tol) {
  std::map<std::size_t, std::size_t> targets;
  for (const auto& e : coupling.entries) {
    if (e.mass > tol && ++targets[e.i] > 1) return false;
  }
  return true;
}

Measure point_pair_target(std::size_t x, std::size_t fx) {
  require(x != fx, "x must differ from f(x)");
  return {{x, fx}, {0.5, 0.5}};
}

Measure ball_pair_target(const FiniteMMS& space, std::size_t x, std::size_t fx, double r) {
  const auto bx = ball_indices(space, x, r, BallKind::kOpen);
  const auto bf = ball_indices(space, fx, r, BallKind::kOpen);
  Measure mu;
  require(x != fx, "x must differ from f(x)");
  for (const auto* ball : {&bx, &bf}) {
    const double total = space.mass_of(*ball);
    for (std::size_t p : *ball) {
      mu.points.push_back(p);
      mu.mass.push_back(0.5 * space.weight(p) / total);
    }
  }
  return canonical(mu);
}

GeodesicPlan symmetrized_competitor(const FiniteMMS& space, const std::vector<std::size_t>& f,
                                    const GeodesicPlan& plan,
                                    const std::vector<std::size_t>& first_half,
                                    double fix_tol, double iso_tol) {
  const std::size_t n = space.size();
  require(f.size() == n, "isometry has the wrong size");
  std::vector<std::size_t> inverse(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    require(f[i] < n && inverse[f[i]] == n, "isometry is not a permutation");
    inverse[f[i]] = i;
  }
  if (iso_tol < 0.0) iso_tol = isometry_tol(space);
  if (fix_tol < 0.0) fix_tol = effective_pitch(space);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      require(std::abs(space.d(f[i], f[j]) - space.d(i, j)) <= iso_tol,
              "map is not an isometry within tolerance");
    }
  }

  std::vector<char> side(n, 0);  // 1: first half, 2: its image
  for (std::size_t p : first_half) {
    require(p < n, "target point outside the space");
    side[p] = 1;
  }
  for (std::size_t p : first_half) {
    require(side[f[p]] != 1, "target set meets its image under f");
    side[f[p]] = 2;
  }

  GeodesicPlan out;
  for (const auto& atom : plan.atoms) {
    const DiscreteGeodesic& g = atom.geodesic;
    require(space.d(g.front(), f[g.front()]) <= fix_tol, "plan source is not fixed by f");
    const std::size_t end = g.back();
    require(side[end] != 0, "plan target outside the target set and its image");
    const auto& map = side[end] == 1 ? f : inverse;
    DiscreteGeodesic h = g;
    for (auto& node : h.nodes) node = map[node];
    out.atoms.push_back({std::move(h), atom.mass});
  }
  return out;
}

GeodesicPlan symmetrized_competitor(const FiniteMMS& space, const std::vector<std::size_t>& f,
                                    const GeodesicPlan& plan, std::size_t x, double fix_tol,
                                    double iso_tol) {
  require(x < space.size() && f.size() == space.size(), "point or map outside the space");
  const double tol = fix_tol < 0.0 ? effective_pitch(space) : fix_tol;
  require(space.d(x, f[x]) > tol, "x lies in Fix(f)");
  return symmetrized_competitor(space, f, plan, std::vector<std::size_t>{x}, fix_tol, iso_tol);
}

CompetitorReport verify_competitor(const FiniteMMS& space, const GeodesicPlan& plan,
                                   const GeodesicPlan& competitor, double tol) {
  CompetitorReport r;
  for (double t : {0.0, 1.0}) {
    const auto p = pushforward_at(plan, t, space);
    const auto q = pushforward_at(competitor, t, space);
    for (std::size_t i = 0; i < p.size(); ++i) {
      r.marginal_defect = std::max(r.marginal_defect, std::abs(p[i] - q[i]));
    }
  }
  auto cost = [](const GeodesicPlan& g) {
    double c = 0.0;
    for (const auto& a : g.atoms) c += a.mass * a.geodesic.length * a.geodesic.length;
    return c;
  };
  const double c0 = cost(plan);
  r.cost_defect = std::abs(c0 - cost(competitor));

  std::map<std::vector<std::size_t>, double> diff;
  for (const auto& a : plan.atoms) diff[a.geodesic.nodes] += a.mass;
  for (const auto& a : competitor.atoms) diff[a.geodesic.nodes] -= a.mass;
  for (const auto& [nodes, m] : diff) r.plan_distance += std::abs(m);

  r.marginals_equal = r.marginal_defect <= tol;
  r.cost_equal = r.cost_defect <= tol * std::max(1.0, c0);
  r.distinct = r.plan_distance > tol;
  return r;
}

}  // namespace mmslab
