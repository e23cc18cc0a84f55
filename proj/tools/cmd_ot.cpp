#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "commands.hpp"
#include "inputs.hpp"
#include "mmslab/error.hpp"
#include "mmslab/space_io.hpp"
#include "mmslab/transport.hpp"

namespace mmslab::cli {
namespace {

struct PairOptions {
  std::string space;
  std::string mu0;
  std::string mu1;
};

struct CompetitorOptions {
  std::string space;
  std::string map;
  std::string A;
  std::size_t x = 0;
  std::string variant = "point";
  double r = 0.0;
  double fix_tol = -1.0;
};

struct SelfcheckOptions {
  std::size_t count = 200;
  std::size_t max_support = 5;
};

json coupling_json(const Coupling& c) {
  return {{"cost", c.cost},
          {"entries", to_json(c.entries)},
          {"marginal_residual", marginal_residual(c)},
          {"induced_by_map", is_induced_by_map(c)}};
}

// Random planar points with Euclidean distances and random supports.
std::pair<FiniteMMS, std::pair<Measure, Measure>> random_instance(std::mt19937_64& rng,
                                                                  std::size_t max_support) {
  std::uniform_int_distribution<std::size_t> size(1, max_support);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t a = size(rng);
  const std::size_t b = size(rng);
  const std::size_t n = a + b;
  std::vector<std::pair<double, double>> xy(n);
  for (auto& p : xy) p = {unit(rng), unit(rng)};
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist[i * n + j] = std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second);
    }
  }
  FiniteMMS space({}, std::move(dist), std::vector<double>(n, 1.0 / n), {});
  Measure mu0;
  Measure mu1;
  double t0 = 0.0;
  double t1 = 0.0;
  for (std::size_t i = 0; i < a; ++i) {
    mu0.points.push_back(i);
    mu0.mass.push_back(0.05 + unit(rng));
    t0 += mu0.mass.back();
  }
  for (std::size_t j = 0; j < b; ++j) {
    mu1.points.push_back(a + j);
    mu1.mass.push_back(0.05 + unit(rng));
    t1 += mu1.mass.back();
  }
  for (double& m : mu0.mass) m /= t0;
  for (double& m : mu1.mass) m /= t1;
  return {std::move(space), {mu0, mu1}};
}

}  // namespace

void add_ot_commands(CLI::App& app, Context& ctx) {
  auto* ot = app.add_subcommand("ot", "Optimal transport");
  ot->require_subcommand(1);

  auto pair = std::make_shared<PairOptions>();
  auto add_pair = [pair](CLI::App* sub) {
    sub->add_option("--space", pair->space, "Space file")->required();
    sub->add_option("--mu0", pair->mu0, "Source measure")->required();
    sub->add_option("--mu1", pair->mu1, "Target measure")->required();
  };

  auto* solve = ot->add_subcommand("solve", "Exact W2^2 and an optimal coupling");
  add_pair(solve);
  solve->callback([&ctx, pair] {
    begin(ctx, "ot solve", "Wasserstein squared distance");
    const FiniteMMS s = read_space(pair->space);
    const Measure mu0 = parse_measure(pair->mu0, s);
    const Measure mu1 = parse_measure(pair->mu1, s);
    const W2Result r = solve_w2(s, mu0, mu1);
    ctx.report.results = {{"cost", r.cost}, {"w2", std::sqrt(r.cost)},
                          {"coupling", coupling_json(r.coupling)}};
    ctx.report.table.columns = {"i", "j", "mass"};
    for (const auto& e : r.coupling.entries) ctx.report.table.rows.push_back({e.i, e.j, e.mass});
  });

  auto* probe = ot->add_subcommand("probe", "Decide whether the optimal coupling is unique");
  add_pair(probe);
  probe->callback([&ctx, pair] {
    begin(ctx, "ot probe", "uniqueness of optimal plans");
    const FiniteMMS s = read_space(pair->space);
    const auto v = uniqueness_probe(s, parse_measure(pair->mu0, s), parse_measure(pair->mu1, s));
    ctx.report.results = {{"unique", v.unique},
                          {"optimal_cost", v.optimal_cost},
                          {"first", coupling_json(v.first)},
                          {"witness", v.witness ? coupling_json(*v.witness) : json(nullptr)},
                          {"witness_cost_gap", v.witness_cost_gap},
                          {"witness_distance", v.witness_distance}};
  });

  auto comp = std::make_shared<CompetitorOptions>();
  auto* c = ot->add_subcommand("competitor", "Symmetrized competitor to an optimal geodesic plan");
  c->add_option("--space", comp->space, "Space file")->required();
  c->add_option("--map", comp->map, "Isometry f (file, reflection:k or enum:i)")->required();
  c->add_option("--A", comp->A, "Source set inside Fix(f)")->required();
  c->add_option("--x", comp->x, "Target point outside Fix(f)")->required();
  c->add_option("--variant", comp->variant, "point or ball")
      ->check(CLI::IsMember({"point", "ball"}));
  c->add_option("--r", comp->r, "Ball radius for the ball variant");
  c->add_option("--fix-tol", comp->fix_tol, "Fixed-point tolerance (default: pitch)");
  c->callback([&ctx, comp] {
    begin(ctx, "ot competitor", "symmetric competitor to an optimal geodesic plan");
    const FiniteMMS s = read_space(comp->space);
    require(comp->x < s.size(), "x out of range");
    const Permutation f = parse_map(comp->map, s);
    const Measure mu0 = normalized_restriction(s, parse_set(comp->A, s));
    const std::size_t fx = f[comp->x];
    Measure mu1;
    std::vector<std::size_t> first_half;
    if (comp->variant == "point") {
      mu1 = point_pair_target(comp->x, fx);
      first_half = {comp->x};
    } else {
      require(comp->r > 0.0, "the ball variant needs --r > 0");
      mu1 = ball_pair_target(s, comp->x, fx, comp->r);
      first_half = ball_indices(s, comp->x, comp->r, BallKind::kOpen);
    }
    const W2Result w = solve_w2(s, mu0, mu1);
    const GeodesicPlan plan = lift_to_geodesic_plan(s, w.coupling);
    const GeodesicPlan other = symmetrized_competitor(s, f, plan, first_half, comp->fix_tol);
    const CompetitorReport rep = verify_competitor(s, plan, other);
    const auto probe = uniqueness_probe(s, mu0, mu1);
    ctx.report.results = {{"cost", w.cost},
                          {"fx", fx},
                          {"atoms", plan.atoms.size()},
                          {"marginals_equal", rep.marginals_equal},
                          {"cost_equal", rep.cost_equal},
                          {"distinct", rep.distinct},
                          {"marginal_defect", rep.marginal_defect},
                          {"cost_defect", rep.cost_defect},
                          {"plan_distance", rep.plan_distance},
                          {"probe_unique", probe.unique},
                          {"probe_witness_cost_gap", probe.witness_cost_gap}};
  });

  auto self = std::make_shared<SelfcheckOptions>();
  auto* sc = ot->add_subcommand("selfcheck", "Simplex against spanning-tree enumeration");
  sc->add_option("--count", self->count, "Random instances");
  sc->add_option("--max-support", self->max_support, "Largest support size (<= 5)");
  sc->callback([&ctx, self] {
    begin(ctx, "ot selfcheck", "Wasserstein squared distance");
    std::mt19937_64 rng(ctx.global.seed);
    double worst = 0.0;
    ctx.report.table.columns = {"instance", "simplex", "enumeration", "delta"};
    for (std::size_t i = 0; i < self->count; ++i) {
      auto [space, mus] = random_instance(rng, std::min<std::size_t>(self->max_support, 5));
      const double a = solve_w2(space, mus.first, mus.second).cost;
      const double b = brute_force_w2(space, mus.first, mus.second);
      worst = std::max(worst, std::abs(a - b));
      ctx.report.table.rows.push_back({i, a, b, a - b});
    }
    ctx.report.results = {{"instances", self->count},
                          {"max_abs_delta", worst},
                          {"pass", worst <= 1e-9}};
  });
}

}  // namespace mmslab::cli
