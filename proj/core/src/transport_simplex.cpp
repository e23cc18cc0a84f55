#include "transport_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mmslab/error.hpp"

namespace mmslab::detail {
namespace {

struct Tree {
  // adjacency over nodes 0..m-1 (rows) and m..m+n-1 (columns); values are
  // positions in the basis vector
  std::vector<std::vector<std::size_t>> adj;
};

Tree build_tree(std::size_t m, std::size_t n,
                const std::vector<std::pair<std::size_t, std::size_t>>& basis) {
  Tree t;
  t.adj.assign(m + n, {});
  for (std::size_t b = 0; b < basis.size(); ++b) {
    t.adj[basis[b].first].push_back(b);
    t.adj[m + basis[b].second].push_back(b);
  }
  return t;
}

std::size_t other_end(std::size_t m, const std::pair<std::size_t, std::size_t>& cell,
                      std::size_t node) {
  return node < m ? m + cell.second : cell.first;
}

void compute_potentials(const TransportProblem& p,
                        const std::vector<std::pair<std::size_t, std::size_t>>& basis,
                        const std::vector<double>& cost, const Tree& tree,
                        std::vector<double>& u, std::vector<double>& v) {
  const std::size_t m = p.m;
  std::vector<char> seen(m + p.n, 0);
  std::vector<std::size_t> stack{0};
  u.assign(m, 0.0);
  v.assign(p.n, 0.0);
  seen[0] = 1;
  while (!stack.empty()) {
    const std::size_t node = stack.back();
    stack.pop_back();
    for (std::size_t b : tree.adj[node]) {
      const auto& cell = basis[b];
      const std::size_t next = other_end(m, cell, node);
      if (seen[next]) continue;
      seen[next] = 1;
      const double c = cost[cell.first * p.n + cell.second];
      if (next < m) {
        u[next] = c - v[cell.second];
      } else {
        v[next - m] = c - u[cell.first];
      }
      stack.push_back(next);
    }
  }
}

}  // namespace

std::vector<double> tree_flows(std::size_t m, std::size_t n,
                               const std::vector<std::pair<std::size_t, std::size_t>>& basis,
                               const std::vector<double>& supply,
                               const std::vector<double>& demand) {
  const Tree tree = build_tree(m, n, basis);
  std::vector<double> rem(m + n);
  std::copy(supply.begin(), supply.end(), rem.begin());
  std::copy(demand.begin(), demand.end(), rem.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<std::size_t> degree(m + n);
  for (std::size_t node = 0; node < m + n; ++node) degree[node] = tree.adj[node].size();
  std::vector<char> done(basis.size(), 0);
  std::vector<double> flow(basis.size(), 0.0);
  std::vector<std::size_t> leaves;
  for (std::size_t node = 0; node < m + n; ++node) {
    if (degree[node] == 1) leaves.push_back(node);
  }
  while (!leaves.empty()) {
    const std::size_t leaf = leaves.back();
    leaves.pop_back();
    if (degree[leaf] != 1) continue;
    std::size_t edge = basis.size();
    for (std::size_t b : tree.adj[leaf]) {
      if (!done[b]) {
        edge = b;
        break;
      }
    }
    done[edge] = 1;
    flow[edge] = rem[leaf];
    rem[leaf] = 0.0;
    degree[leaf] = 0;
    const std::size_t other = other_end(m, basis[edge], leaf);
    rem[other] -= flow[edge];
    if (--degree[other] == 1) leaves.push_back(other);
  }
  return flow;
}

TransportSolution solve_transport(const TransportProblem& p) {
  const std::size_t m = p.m;
  const std::size_t n = p.n;
  require(m > 0 && n > 0, "transport problem has an empty side");
  require(p.supply.size() == m && p.demand.size() == n && p.cost.size() == m * n,
          "transport problem has inconsistent sizes");
  const bool has_forbidden = !p.forbidden.empty();

  double scale = 0.0;
  for (std::size_t c = 0; c < m * n; ++c) {
    if (!has_forbidden || !p.forbidden[c]) scale = std::max(scale, std::abs(p.cost[c]));
  }
  std::vector<double> cost = p.cost;
  double top = scale;
  if (has_forbidden) {
    const double penalty = 1e6 * (1.0 + scale);
    for (std::size_t c = 0; c < m * n; ++c) {
      if (p.forbidden[c]) cost[c] = penalty;
    }
    top = penalty;
  }
  const double eps = 1e-12 * (1.0 + top);

  // Northwest corner: exactly m + n - 1 cells, degenerate ones included.
  std::vector<std::pair<std::size_t, std::size_t>> basis;
  std::vector<double> flow;
  {
    std::vector<double> s = p.supply;
    std::vector<double> d = p.demand;
    std::size_t i = 0;
    std::size_t j = 0;
    while (true) {
      const double x = std::min(s[i], d[j]);
      basis.emplace_back(i, j);
      flow.push_back(x);
      s[i] -= x;
      d[j] -= x;
      if (i == m - 1 && j == n - 1) break;
      if (i == m - 1) {
        ++j;
      } else if (j == n - 1) {
        ++i;
      } else if (s[i] <= d[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }
  std::vector<char> in_basis(m * n, 0);
  for (const auto& [i, j] : basis) in_basis[i * n + j] = 1;

  TransportSolution sol;
  const std::size_t max_pivots = 50 * (m + n) * (m + n) + 1000;
  std::size_t degenerate_run = 0;
  std::vector<std::size_t> parent_edge(m + n);
  std::vector<char> seen(m + n);
  while (true) {
    const Tree tree = build_tree(m, n, basis);
    compute_potentials(p, basis, cost, tree, sol.u, sol.v);

    const bool bland = degenerate_run > m + n;
    std::size_t enter = m * n;
    double best = -eps;
    for (std::size_t i = 0; i < m && !(bland && enter < m * n); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t c = i * n + j;
        if (in_basis[c]) continue;
        const double rc = cost[c] - sol.u[i] - sol.v[j];
        if (rc < best) {
          enter = c;
          if (bland) break;
          best = rc;
        }
      }
    }
    if (enter == m * n) break;
    if (++sol.pivots > max_pivots) {
      fail(ErrorCode::kBudgetExceeded, "transportation simplex exceeded its pivot budget");
    }

    // Tree path from the entering row to the entering column.
    const std::size_t ei = enter / n;
    const std::size_t ej = enter % n;
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<std::size_t> stack{ei};
    seen[ei] = 1;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t b : tree.adj[node]) {
        const std::size_t next = other_end(m, basis[b], node);
        if (seen[next]) continue;
        seen[next] = 1;
        parent_edge[next] = b;
        stack.push_back(next);
      }
    }
    std::vector<std::size_t> path;  // from the column side back to the row
    for (std::size_t node = m + ej; node != ei;) {
      const std::size_t b = parent_edge[node];
      path.push_back(b);
      node = other_end(m, basis[b], node);
    }

    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = path.size();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const std::size_t b = path[k];
      const std::size_t key = basis[b].first * n + basis[b].second;
      if (flow[b] < theta ||
          (flow[b] == theta && bland &&
           key < basis[path[leave]].first * n + basis[path[leave]].second)) {
        theta = flow[b];
        leave = k;
      }
    }
    degenerate_run = theta <= 0.0 ? degenerate_run + 1 : 0;
    for (std::size_t k = 0; k < path.size(); ++k) {
      flow[path[k]] += (k % 2 == 0) ? -theta : theta;
    }
    const std::size_t out = path[leave];
    in_basis[basis[out].first * n + basis[out].second] = 0;
    basis[out] = {ei, ej};
    flow[out] = theta;
    in_basis[enter] = 1;
  }

  const auto exact = tree_flows(m, n, basis, p.supply, p.demand);
  sol.flow.assign(m * n, 0.0);
  double mass_scale = 0.0;
  for (double s : p.supply) mass_scale = std::max(mass_scale, s);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    double f = exact[b];
    if (f < 0.0 && f >= -1e-12 * (1.0 + mass_scale)) f = 0.0;
    sol.flow[basis[b].first * n + basis[b].second] = f;
  }

  // Fold residuals into the largest entry of each row, then each column.
  for (std::size_t i = 0; i < m; ++i) {
    double sum = 0.0;
    std::size_t arg = i * n;
    for (std::size_t j = 0; j < n; ++j) {
      sum += sol.flow[i * n + j];
      if (sol.flow[i * n + j] > sol.flow[arg]) arg = i * n + j;
    }
    const double r = p.supply[i] - sum;
    if (std::abs(r) <= 1e-12 * (1.0 + mass_scale)) sol.flow[arg] += r;
  }
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    std::size_t arg = j;
    for (std::size_t i = 0; i < m; ++i) {
      sum += sol.flow[i * n + j];
      if (sol.flow[i * n + j] > sol.flow[arg]) arg = i * n + j;
    }
    const double r = p.demand[j] - sum;
    if (std::abs(r) <= 1e-12 * (1.0 + mass_scale)) sol.flow[arg] += r;
  }

  if (has_forbidden) {
    for (std::size_t c = 0; c < m * n; ++c) {
      if (p.forbidden[c] && sol.flow[c] > 1e-12 * (1.0 + mass_scale)) {
        fail(ErrorCode::kPrecondition, "transport problem is infeasible on the allowed cells");
      }
    }
  }
  sol.basis = std::move(basis);
  compute_potentials(p, sol.basis, cost, build_tree(m, n, sol.basis), sol.u, sol.v);
  return sol;
}

}  // namespace mmslab::detail
