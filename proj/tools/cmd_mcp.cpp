#include <algorithm>
#include <cmath>
#include <memory>

#include "commands.hpp"
#include "inputs.hpp"
#include "mmslab/contraction.hpp"
#include "mmslab/error.hpp"
#include "mmslab/generators.hpp"
#include "mmslab/space_io.hpp"

namespace mmslab::cli {
namespace {

struct VerifyOptions {
  std::string space;
  std::size_t x = 0;
  std::string A;
  double allowance = -1.0;
  std::size_t dense = 0;
  std::string mode = "nearest";
};

struct ScheduleOptions {
  std::string space;
  std::size_t source = 0;
  std::size_t target_fiber = 0;
  std::string ycells;
  double allowance = -1.0;
};

struct ScalarOptions {
  std::size_t t_grid = 2000;
  std::size_t d_grid = 2000;
};

std::vector<double> t_samples(std::size_t dense) {
  std::vector<double> extra;
  if (dense > 1) {
    for (std::size_t i = 0; i < dense; ++i) {
      extra.push_back(static_cast<double>(i) / static_cast<double>(dense - 1));
    }
  }
  return default_t_samples(extra);
}

}  // namespace

void add_mcp_commands(CLI::App& app, Context& ctx) {
  auto* mcp = app.add_subcommand("mcp", "Measure contraction checks");
  mcp->require_subcommand(1);

  auto vo = std::make_shared<VerifyOptions>();
  auto* v = mcp->add_subcommand("verify", "Check the MCP(2,3) inequality from x onto A");
  v->add_option("--space", vo->space, "Space file")->required();
  v->add_option("--x", vo->x, "Contraction center")->required();
  v->add_option("--A", vo->A, "Target set")->required();
  v->add_option("--allowance", vo->allowance, "Absolute mass allowance per cell");
  v->add_option("--dense", vo->dense, "Extra uniform t samples");
  v->add_option("--mode", vo->mode, "Pushforward rule")->check(CLI::IsMember({"nearest", "linear"}));
  v->callback([&ctx, vo] {
    begin(ctx, "mcp verify", "MCP(2,3) contraction inequality");
    const FiniteMMS s = read_space(vo->space);
    require(vo->x < s.size(), "x out of range");
    const auto A = parse_set(vo->A, s);
    const GeodesicPlan plan = mcp_plan(s, vo->x, A);
    MCPOptions opt;
    opt.t_samples = t_samples(vo->dense);
    opt.allowance = vo->allowance;
    opt.mode = vo->mode == "linear" ? PushforwardMode::kLinear : PushforwardMode::kNearest;
    opt.keep_records = !ctx.global.csv_path.empty();
    const MCPReport r = mcp_check(s, vo->x, A, plan, opt);
    json samples = json::array();
    for (const auto& smp : r.samples) {
      samples.push_back({{"t", smp.t}, {"worst_slack", smp.worst_slack}, {"worst_cell", smp.worst_cell}});
    }
    ctx.report.results = {{"pass", r.pass},
                          {"worst_slack", r.worst_slack},
                          {"worst_t", r.worst_t},
                          {"worst_cell", r.worst_cell},
                          {"allowance", r.allowance},
                          {"target_mass", s.mass_of(A)},
                          {"atoms", plan.atoms.size()},
                          {"samples", samples}};
    ctx.report.table.columns = {"t", "cell", "lhs", "rhs", "slack"};
    for (const auto& rec : r.records) {
      ctx.report.table.rows.push_back({rec.t, rec.cell, rec.lhs, rec.rhs, rec.slack});
    }
  });

  auto so = std::make_shared<ScheduleOptions>();
  auto* sch = mcp->add_subcommand("schedule", "Necklace transport schedule and density check");
  sch->add_option("--space", so->space, "Necklace space file")->required();
  sch->add_option("--source", so->source, "Source cell in the first diamond")->required();
  sch->add_option("--target-fiber", so->target_fiber, "Fiber of the second diamond")->required();
  sch->add_option("--ycells", so->ycells, "Target y-cells, e.g. 2,3,4,5")->required();
  sch->add_option("--allowance", so->allowance, "Relative allowance (default 8 pitches)");
  sch->callback([&ctx, so] {
    begin(ctx, "mcp schedule", "necklace transport schedule");
    const FiniteMMS s = read_space(so->space);
    ScheduleParams p;
    p.source = so->source;
    p.target_fiber = so->target_fiber;
    for (int c : parse_ints(so->ycells)) {
      require(c >= 0, "y-cells must be nonnegative");
      p.target_ycells.push_back(static_cast<std::size_t>(c));
    }
    const GeodesicPlan plan = necklace_schedule(s, p);
    const ScheduleReport r = schedule_density_check(s, plan, p, {}, so->allowance);

    // Endpoint marginals against (delta_source, m|A / m(A)).
    const auto ends = endpoint_coupling(plan);
    const Measure target = normalized_restriction(s, r.geometry.target_cells);
    const auto want = target.dense(s.size());
    std::vector<double> got0(s.size(), 0.0);
    std::vector<double> got1(s.size(), 0.0);
    for (const auto& e : ends) {
      got0[e.i] += e.mass;
      got1[e.j] += e.mass;
    }
    double defect = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      defect = std::max(defect, std::abs(got0[i] - (i == p.source ? 1.0 : 0.0)));
      defect = std::max(defect, std::abs(got1[i] - want[i]));
    }
    const auto& g = r.geometry;
    json samples = json::array();
    ctx.report.table.columns = {"t", "worst_ratio", "worst_cell"};
    for (const auto& smp : r.samples) {
      samples.push_back({{"t", smp.t}, {"worst_ratio", smp.worst_ratio}, {"worst_cell", smp.worst_cell}});
      ctx.report.table.rows.push_back({smp.t, smp.worst_ratio, smp.worst_cell});
    }
    ctx.report.results = {
        {"pass", r.pass},
        {"marginal_defect", defect},
        {"worst_ratio", r.worst_ratio},
        {"worst_t", r.worst_t},
        {"allowance", r.allowance},
        {"geometry",
         {{"x_tilde", g.x_tilde}, {"y_tilde", g.y_tilde}, {"x_prime", g.x_prime},
          {"x_hat", g.x_hat}, {"t_hat", g.t_hat}, {"t1", g.t1}, {"t2", g.t2},
          {"target_cells", g.target_cells}}},
        {"height_bound_holds", r.height_bound_holds},
        {"height_bound_worst_margin", r.height_bound_worst_margin},
        {"chain_lhs", r.chain_lhs},
        {"chain_rhs", r.chain_rhs},
        {"max_length", r.max_length},
        {"in_scalar_domain", r.in_scalar_domain},
        {"samples", samples}};
  });

  auto sc = std::make_shared<ScalarOptions>();
  auto* scal = mcp->add_subcommand("scalar-bound", "Grid check of the scalar contraction estimate");
  scal->add_option("--t-grid", sc->t_grid, "Points in t");
  scal->add_option("--d-grid", sc->d_grid, "Points in d");
  scal->callback([&ctx, sc] {
    begin(ctx, "mcp scalar-bound", "scalar contraction estimate 5/4 - t/4");
    const auto r = scalar_bound_check(sc->t_grid, sc->d_grid);
    ctx.report.results = {{"holds", r.holds},
                          {"min_margin", r.min_margin},
                          {"argmin_t", r.argmin_t},
                          {"argmin_d", r.argmin_d},
                          {"t_grid", r.t_grid},
                          {"d_grid", r.d_grid}};
  });
}

}  // namespace mmslab::cli
