#include <memory>

#include "commands.hpp"
#include "inputs.hpp"
#include "mmslab/error.hpp"
#include "mmslab/regularity.hpp"
#include "mmslab/space_io.hpp"

namespace mmslab::cli {
namespace {

struct GhOptions {
  std::string space;
  std::string space2;
  std::size_t max_size = 8;
  std::size_t nodes = 2'000'000;
  std::size_t x = 0;
  double eps = 0.0;
  double delta = 0.0;
  std::string k = "1";
  std::size_t budget = 64;
  ScanOptions scan;
};

std::vector<int> dims(const std::string& spec) {
  const auto k = parse_ints(spec);
  require(!k.empty(), "--k needs at least one dimension");
  return k;
}

json level_json(const ScanLevel& l) {
  return {{"r", l.r},
          {"ball_size", l.ball_size},
          {"degenerate", l.degenerate},
          {"estimate", l.estimate},
          {"estimate_lower", l.estimate_lower},
          {"error", l.error},
          {"resolution", l.resolution},
          {"betweenness", l.betweenness},
          {"lower", l.lower},
          {"upper", l.upper},
          {"threshold", l.threshold},
          {"status", to_string(l.status)}};
}

json mass_json(const RegularMass& m) {
  return {{"in", m.in}, {"out", m.out}, {"inconclusive", m.inconclusive}};
}

}  // namespace

void add_gh_commands(CLI::App& app, Context& ctx) {
  auto* gh = app.add_subcommand("gh", "Gromov-Hausdorff distances and regularity scans");
  gh->require_subcommand(1);
  auto o = std::make_shared<GhOptions>();
  auto scan_opt = [o](CLI::App* sub) {
    sub->add_option("--space", o->space, "Space file")->required();
    sub->add_option("--eps", o->eps, "Relative GH tolerance")->required();
    sub->add_option("--delta", o->delta, "Largest radius (exclusive)")->required();
    sub->add_option("--k", o->k, "Model dimensions, e.g. 1,2");
    sub->add_option("--r-samples", o->scan.r_samples, "Radii per scan");
    sub->add_option("--subsample", o->scan.subsample, "Farthest-point subsample size");
    sub->add_option("--gh-nodes", o->scan.gh_nodes, "Node budget of each subsample GH search");
  };

  auto* ex = gh->add_subcommand("exact", "Exact GH distance between two small spaces");
  ex->add_option("--space", o->space, "First space file")->required();
  ex->add_option("--space2", o->space2, "Second space file")->required();
  ex->add_option("--max-size", o->max_size, "Largest space accepted");
  ex->add_option("--nodes", o->nodes, "Search node budget");
  ex->callback([&ctx, o] {
    begin(ctx, "gh exact", "Gromov-Hausdorff distance");
    const FiniteMMS X = read_space(o->space);
    const FiniteMMS Y = read_space(o->space2);
    const GHResult r = gh_exact(X, Y, o->max_size, o->nodes);
    json rel = json::array();
    for (const auto& [a, b] : r.witness.relation) rel.push_back({a, b});
    ctx.report.results = {{"value", r.value},
                          {"distortion", r.witness.distortion},
                          {"exact", r.exact},
                          {"lower", r.lower},
                          {"nodes", r.nodes},
                          {"lower_bound", gh_lower_bound(X, Y)},
                          {"relation", rel}};
  });

  auto* sc = gh->add_subcommand("scan", "Classify a point against Euclidean model balls");
  scan_opt(sc);
  sc->add_option("--x", o->x, "Point")->required();
  sc->callback([&ctx, o] {
    begin(ctx, "gh scan", "epsilon-regular set at scales below delta");
    const FiniteMMS s = read_space(o->space);
    const auto results = epsilon_regular_scan(s, o->x, o->eps, o->delta, dims(o->k), o->scan);
    json per_k = json::array();
    ctx.report.table.columns = {"k", "r", "lower", "upper", "threshold", "status"};
    for (const auto& r : results) {
      json levels = json::array();
      for (const auto& l : r.levels) {
        levels.push_back(level_json(l));
        ctx.report.table.rows.push_back({r.k, l.r, l.lower, l.upper, l.threshold, to_string(l.status)});
      }
      per_k.push_back({{"k", r.k}, {"verdict", to_string(r.verdict)}, {"margin", r.margin},
                       {"levels", levels}});
      ctx.report.inconclusive = ctx.report.inconclusive || r.verdict == Verdict::kInconclusive;
    }
    ctx.report.results = {{"per_k", per_k}};
  });

  auto* rm = gh->add_subcommand("regular-mass", "Mass classified in, out or inconclusive");
  scan_opt(rm);
  rm->add_option("--budget", o->budget, "Points scanned");
  rm->callback([&ctx, o] {
    begin(ctx, "gh regular-mass", "measure of the epsilon-regular set");
    const FiniteMMS s = read_space(o->space);
    const auto r = regular_set_measure(s, o->eps, o->delta, dims(o->k), o->budget, o->scan);
    json per_k = json::array();
    for (std::size_t i = 0; i < r.k_set.size(); ++i) {
      json m = mass_json(r.per_k[i]);
      m["k"] = r.k_set[i];
      per_k.push_back(m);
    }
    ctx.report.results = {{"scanned", r.scanned.size()},
                          {"scanned_mass", r.scanned_mass},
                          {"total_mass", r.total_mass},
                          {"overall", mass_json(r.overall)},
                          {"per_k", per_k}};
    ctx.report.inconclusive = r.overall.inconclusive > 0.0;
  });
}

}  // namespace mmslab::cli
