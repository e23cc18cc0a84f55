#include <memory>

#include "commands.hpp"
#include "inputs.hpp"
#include "mmslab/error.hpp"
#include "mmslab/generators.hpp"
#include "mmslab/space_io.hpp"

namespace mmslab::cli {
namespace {

struct GenOptions {
  std::string kind;
  std::string out;
  double pitch = 0.0;
  std::size_t n = 3;
  std::size_t res = 64;
  double radius = 1.0;
  std::size_t count = 64;
  std::string beads;
  std::size_t fiber_cells = 8;
  int k = 2;
};

FiniteMMS generate(const GenOptions& o) {
  if (o.kind == "segment") return segment_space(o.pitch);
  if (o.kind == "circle") return circle_space(o.radius, o.count);
  if (o.kind == "earring") return hawaiian_truncation(o.n, o.res);
  if (o.kind == "ball") return euclidean_ball_grid(o.k, o.radius, o.pitch);
  if (o.kind == "necklace") {
    NecklaceParams p;
    p.pitch = o.pitch;
    p.fiber_cells = o.fiber_cells;
    const auto values = parse_doubles(o.beads);
    // "x1:r1,x2:r2" arrives as alternating values once ':' is a separator.
    if (values.size() % 2 != 0) fail(ErrorCode::kFormat, "beads must be x:r pairs");
    for (std::size_t b = 0; b < values.size(); b += 2) p.beads.push_back({values[b], values[b + 1]});
    return necklace(p);
  }
  fail(ErrorCode::kPrecondition, "unknown space kind '" + o.kind + "'");
}

json summary(const FiniteMMS& s) {
  return {{"generator", s.meta().generator},
          {"size", s.size()},
          {"total_mass", s.total_mass()},
          {"diameter", s.diameter()},
          {"pitch", effective_pitch(s)}};
}

}  // namespace

void add_space_commands(CLI::App& app, Context& ctx) {
  auto* space = app.add_subcommand("space", "Generate and validate finite spaces");
  space->require_subcommand(1);

  auto gen = std::make_shared<GenOptions>();
  auto* g = space->add_subcommand("gen", "Write a generated space as JSON");
  g->add_option("--kind", gen->kind, "segment, circle, earring, necklace or ball")->required();
  g->add_option("--out", gen->out, "Output space file")->required();
  g->add_option("--pitch", gen->pitch, "Cell size (segment, necklace, ball)");
  g->add_option("--n", gen->n, "Number of earring circles");
  g->add_option("--res", gen->res, "Cells per earring circle");
  g->add_option("--radius", gen->radius, "Circle or ball radius");
  g->add_option("--count", gen->count, "Circle points");
  g->add_option("--beads", gen->beads, "Necklace beads as x:r,x:r");
  g->add_option("--fiber-cells", gen->fiber_cells, "Cells per diamond fiber");
  g->add_option("--k", gen->k, "Ball dimension");
  g->callback([&ctx, gen] {
    begin(ctx, "space gen", "finite metric measure space model");
    GenOptions o = *gen;
    for (char& c : o.beads) {
      if (c == ':') c = ',';
    }
    const FiniteMMS s = generate(o);
    write_space(s, o.out);
    ctx.report.results = summary(s);
  });

  auto path = std::make_shared<std::string>();
  auto tol = std::make_shared<double>(1e-9);
  auto* v = space->add_subcommand("validate", "Check metric axioms and weights");
  v->add_option("--space", *path, "Space file")->required();
  v->add_option("--tol", *tol, "Absolute tolerance");
  v->callback([&ctx, path, tol] {
    begin(ctx, "space validate", "metric measure space axioms");
    const FiniteMMS s = read_space(*path);
    const auto diag = validate_space(s, *tol);
    json violations = json::array();
    for (const auto& x : diag.violations) {
      violations.push_back(
          {{"kind", to_string(x.kind)}, {"i", x.i}, {"j", x.j}, {"k", x.k}, {"amount", x.amount}});
      ctx.report.table.rows.push_back({to_string(x.kind), x.i, x.j, x.k, x.amount});
    }
    ctx.report.table.columns = {"kind", "i", "j", "k", "amount"};
    ctx.report.results = summary(s);
    ctx.report.results["valid"] = diag.ok();
    ctx.report.results["violation_count"] = diag.violation_count;
    ctx.report.results["worst_triangle_defect"] = diag.worst_triangle_defect;
    ctx.report.results["violations"] = violations;
  });
}

}  // namespace mmslab::cli
