#include <algorithm>
#include <memory>
#include <random>

#include "commands.hpp"
#include "inputs.hpp"
#include "mmslab/error.hpp"
#include "mmslab/space_io.hpp"
#include "mmslab/symmetry.hpp"

namespace mmslab::cli {
namespace {

struct IsoOptions {
  std::string space;
  double iso_tol = -1.0;
  double fix_tol = -1.0;
  std::size_t node_budget = 50'000'000;
  std::string map;
  std::vector<std::string> maps;
  std::size_t x = 0;
  double r = 0.0;
  double s = 0.0;
  double eps = 0.0;
  std::string K = "all";
  double lo = 0.0;
  double hi = 0.0;
  double tol = 1e-6;
};

struct EscapeOptions {
  std::size_t count = 1000;
  std::string k = "2,3";
  double lo = 1e-4;
  double hi = 0.01;
  double threshold = 0.05;
  std::size_t max_pow = 1'000'000;
};

EnumerationOptions enum_options(const IsoOptions& o) {
  EnumerationOptions e;
  e.iso_tol = o.iso_tol;
  e.node_budget = o.node_budget;
  return e;
}

Subgroup group_of(const IsoOptions& o, const FiniteMMS& s) {
  require(!o.maps.empty(), "at least one --map is required");
  std::vector<Permutation> gens;
  for (const auto& m : o.maps) gens.push_back(parse_map(m, s));
  return generate_subgroup(gens);
}

json fixed_json(const FixedSet& f) {
  return {{"measure", f.measure}, {"cells", f.cells.size()}};
}

}  // namespace

void add_iso_commands(CLI::App& app, Context& ctx) {
  auto* iso = app.add_subcommand("iso", "Isometries, fixed sets and displacement");
  iso->require_subcommand(1);
  auto o = std::make_shared<IsoOptions>();
  auto space_opt = [o](CLI::App* sub) {
    sub->add_option("--space", o->space, "Space file")->required();
    sub->add_option("--iso-tol", o->iso_tol, "Distance tolerance (default 1e-9 diam)");
    sub->add_option("--node-budget", o->node_budget, "Search node budget");
  };
  auto fix_opt = [o](CLI::App* sub) {
    sub->add_option("--fix-tol", o->fix_tol, "Fixed-point tolerance (default: pitch)");
  };

  auto* en = iso->add_subcommand("enum", "Enumerate measure-preserving isometries");
  space_opt(en);
  fix_opt(en);
  en->callback([&ctx, o] {
    begin(ctx, "iso enum", "measure-preserving isometries");
    const FiniteMMS s = read_space(o->space);
    const Enumeration e = enumerate_isometries(s, enum_options(*o));
    const double fix_tol = o->fix_tol >= 0.0 ? o->fix_tol : effective_pitch(s);
    json maps = json::array();
    std::size_t preserving = 0;
    ctx.report.table.columns = {"map", "identity", "distortion", "measure_defect", "fix_measure"};
    for (std::size_t i = 0; i < e.maps.size(); ++i) {
      const auto& m = e.maps[i];
      const FixedSet f = fixed_set(s, m.perm, fix_tol);
      preserving += m.measure_preserving;
      maps.push_back({{"index", i},
                      {"identity", is_identity(m.perm)},
                      {"distortion", m.distortion},
                      {"measure_defect", m.measure_defect},
                      {"measure_preserving", m.measure_preserving},
                      {"fix", fixed_json(f)}});
      ctx.report.table.rows.push_back(
          {i, is_identity(m.perm), m.distortion, m.measure_defect, f.measure});
    }
    const Subgroup closure = generate_subgroup(
        [&] {
          std::vector<Permutation> all;
          for (const auto& m : e.maps) all.push_back(m.perm);
          return all;
        }(),
        e.maps.size() + 1);
    ctx.report.results = {{"count", e.maps.size()},
                          {"complete", e.complete},
                          {"nodes", e.nodes},
                          {"iso_tol", e.iso_tol},
                          {"measure_preserving", preserving},
                          {"closed_under_composition",
                           closure.closed && closure.elements.size() == e.maps.size()},
                          {"maps", maps}};
    ctx.report.inconclusive = !e.complete;
  });

  auto* fx = iso->add_subcommand("fix", "Fixed-point set of a map");
  fx->add_option("--space", o->space, "Space file")->required();
  fx->add_option("--map", o->map, "Map (file, reflection:k or enum:i)")->required();
  fix_opt(fx);
  fx->callback([&ctx, o] {
    begin(ctx, "iso fix", "fixed point set measure");
    const FiniteMMS s = read_space(o->space);
    const Permutation g = parse_map(o->map, s);
    const IsometryMap m = make_isometry(s, g);
    const double tol = o->fix_tol >= 0.0 ? o->fix_tol : effective_pitch(s);
    const FixedSet f = fixed_set(s, g, tol);
    ctx.report.results = {{"measure", f.measure},
                          {"total_mass", s.total_mass()},
                          {"cells", f.cells},
                          {"distortion", m.distortion},
                          {"measure_defect", m.measure_defect},
                          {"fix_tol", tol}};
    ctx.report.table.columns = {"cell", "weight"};
    for (std::size_t c : f.cells) ctx.report.table.rows.push_back({c, s.weight(c)});
  });

  auto* dp = iso->add_subcommand("displacement", "D(group, r, x) for a generated subgroup");
  dp->add_option("--space", o->space, "Space file")->required();
  dp->add_option("--map", o->maps, "Generator (repeatable)")->required();
  dp->add_option("--x", o->x, "Center")->required();
  dp->add_option("--r", o->r, "Radius")->required();
  dp->callback([&ctx, o] {
    begin(ctx, "iso displacement", "subgroup displacement on a half ball");
    const FiniteMMS s = read_space(o->space);
    require(o->x < s.size(), "x out of range");
    const Subgroup g = group_of(*o, s);
    ctx.report.results = {{"order", g.elements.size()},
                          {"closed", g.closed},
                          {"displacement", displacement(s, g, o->r, o->x)},
                          {"r_over_20", o->r / 20.0}};
    ctx.report.inconclusive = !g.closed;
  });

  auto* ca = iso->add_subcommand("condition-a", "Largest fixed mass in a ball over nontrivial maps");
  space_opt(ca);
  fix_opt(ca);
  ca->add_option("--x", o->x, "Center")->required();
  ca->add_option("--s", o->s, "Ball radius")->required();
  ca->callback([&ctx, o] {
    begin(ctx, "iso condition-a", "fixed-set condition on a ball");
    const FiniteMMS s = read_space(o->space);
    const ConditionAReport r = condition_a_scan(s, o->x, o->s, o->fix_tol, enum_options(*o));
    ctx.report.results = {{"holds", r.holds},
                          {"fix_sup", r.fix_sup},
                          {"fix_sup_normalized", r.fix_sup_normalized},
                          {"ball_mass", r.ball_mass},
                          {"gap", r.gap},
                          {"no_nontrivial", r.no_nontrivial},
                          {"complete", r.complete},
                          {"maps", r.enumeration.maps.size()},
                          {"argmax", r.argmax}};
    ctx.report.inconclusive = !r.complete;
  });

  auto* pr = iso->add_subcommand("probe", "Search for a small subgroup inside an eps filter");
  space_opt(pr);
  pr->add_option("--eps", o->eps, "Filter radius")->required();
  pr->add_option("--K", o->K, "Compact set the filter is measured on");
  pr->callback([&ctx, o] {
    begin(ctx, "iso probe", "small subgroup property");
    const FiniteMMS s = read_space(o->space);
    const ProbeResult r = small_subgroup_probe(s, o->eps, parse_set(o->K, s), enum_options(*o));
    ctx.report.results = {{"found", r.found},
                          {"inconclusive", r.inconclusive},
                          {"order", r.group.elements.size()},
                          {"group_displacement", r.group_displacement},
                          {"candidates", r.candidates}};
    ctx.report.inconclusive = r.inconclusive;
  });

  auto* cs = iso->add_subcommand("critical-scale", "Bisection for D(group, r, x) = r/20");
  cs->add_option("--space", o->space, "Space file")->required();
  cs->add_option("--map", o->maps, "Generator (repeatable)")->required();
  cs->add_option("--x", o->x, "Center")->required();
  cs->add_option("--lo", o->lo, "Lower radius")->required();
  cs->add_option("--hi", o->hi, "Upper radius")->required();
  cs->add_option("--tol", o->tol, "Bracket width");
  cs->callback([&ctx, o] {
    begin(ctx, "iso critical-scale", "critical displacement scale r/20");
    const FiniteMMS s = read_space(o->space);
    require(o->x < s.size(), "x out of range");
    const Subgroup g = group_of(*o, s);
    const CriticalScale c = critical_scale(s, g, o->x, o->lo, o->hi, o->tol);
    ctx.report.results = {{"found", c.found}, {"lo", c.lo}, {"hi", c.hi},
                          {"r", c.r}, {"defect", c.defect}, {"order", g.elements.size()}};
    ctx.report.inconclusive = !c.found;
  });

  auto eo = std::make_shared<EscapeOptions>();
  auto* es = iso->add_subcommand("escape", "Powers of random near-identity Euclidean isometries");
  es->add_option("--count", eo->count, "Samples");
  es->add_option("--k", eo->k, "Dimensions, e.g. 2,3");
  es->add_option("--lo", eo->lo, "Smallest initial displacement");
  es->add_option("--hi", eo->hi, "Largest initial displacement");
  es->add_option("--threshold", eo->threshold, "Escape displacement");
  es->add_option("--max-pow", eo->max_pow, "Largest power tried");
  es->callback([&ctx, eo] {
    begin(ctx, "iso escape", "Euclidean isometries escape small balls under powers");
    std::mt19937_64 rng(ctx.global.seed);
    const auto dims = parse_ints(eo->k);
    require(!dims.empty(), "--k needs at least one dimension");
    std::size_t found = 0;
    std::size_t max_n = 0;
    ctx.report.table.columns = {"sample", "k", "initial", "n", "displacement", "found"};
    for (std::size_t i = 0; i < eo->count; ++i) {
      const int k = dims[i % dims.size()];
      const auto g = random_small_isometry(rng, k, eo->lo, eo->hi);
      const auto r = euclidean_power_escape(g, eo->threshold, eo->max_pow);
      found += r.found;
      max_n = std::max(max_n, r.n);
      ctx.report.table.rows.push_back({i, k, r.initial_displacement, r.n, r.displacement, r.found});
    }
    ctx.report.results = {{"samples", eo->count},
                          {"escaped", found},
                          {"all_escaped", found == eo->count},
                          {"max_power", max_n}};
  });
}

}  // namespace mmslab::cli
