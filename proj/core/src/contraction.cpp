#include "mmslab/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "mmslab/error.hpp"
#include "mmslab/parallel.hpp"

namespace mmslab {
namespace {

constexpr double kPi = std::numbers::pi;

double sin2(double x) {
  const double s = std::sin(x);
  return s * s;
}

void require_marginals(const FiniteMMS& space, const GeodesicPlan& plan,
                       const std::vector<double>& mu0, const std::vector<double>& mu1,
                       double tol) {
  const auto e0 = pushforward_at(plan, 0.0, space);
  const auto e1 = pushforward_at(plan, 1.0, space);
  for (std::size_t i = 0; i < space.size(); ++i) {
    require(std::abs(e0[i] - mu0[i]) <= tol, "plan source marginal differs from delta_x");
    require(std::abs(e1[i] - mu1[i]) <= tol,
            "plan target marginal differs from the normalized restriction to A");
  }
}

}  // namespace

double mcp_coefficient(double t, double l) {
  if (l < 1e-8) return t * t * t;
  return t * sin2(t * l) / sin2(l);
}

std::vector<double> default_t_samples(const std::vector<double>& extra) {
  std::vector<double> t;
  for (int i = 0; i <= 32; ++i) t.push_back(0.5 * (1.0 - std::cos(kPi * i / 32.0)));
  t.front() = 0.0;
  t.back() = 1.0;
  for (double e : extra) {
    require(e >= 0.0 && e <= 1.0, "sample time outside [0,1]");
    t.push_back(e);
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

ScalarBoundReport scalar_bound_check(std::size_t t_grid, std::size_t d_grid, double t_lo,
                                     double t_hi, double d_lo, double d_hi) {
  require(t_grid >= 2 && d_grid >= 2, "scalar bound grids need at least 2 points");
  ScalarBoundReport r;
  r.t_grid = t_grid;
  r.d_grid = d_grid;
  r.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < t_grid; ++a) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(a) / static_cast<double>(t_grid - 1);
    const double lhs = 1.25 - 0.25 * t;
    for (std::size_t b = 0; b < d_grid; ++b) {
      const double d =
          d_lo + (d_hi - d_lo) * static_cast<double>(b) / static_cast<double>(d_grid - 1);
      const double margin = t * sin2(d) / sin2(t * d) - lhs;
      if (margin < r.min_margin) {
        r.min_margin = margin;
        r.argmin_t = t;
        r.argmin_d = d;
      }
    }
  }
  r.holds = r.min_margin >= -1e-12;
  return r;
}

double default_mcp_allowance(const FiniteMMS& space) {
  double w = 0.0;
  for (double v : space.weights()) w = std::max(w, v);
  return 4.0 * w;
}

GeodesicPlan mcp_plan(const FiniteMMS& space, std::size_t x, const std::vector<std::size_t>& A) {
  const auto w2 = solve_w2(space, dirac(x), normalized_restriction(space, A));
  return lift_to_geodesic_plan(space, w2.coupling);
}

MCPReport mcp_check(const FiniteMMS& space, std::size_t x, const std::vector<std::size_t>& A,
                    const GeodesicPlan& plan, const MCPOptions& options) {
  require(x < space.size(), "base point outside the space");
  require(!A.empty(), "A must be nonempty");
  for (std::size_t a : A) {
    require(a < space.size(), "A contains a point outside the space");
    require(space.d(x, a) < kPi, "A must lie in B(x, pi)");
  }
  const Measure target = normalized_restriction(space, A);
  require_marginals(space, plan, dirac(x).dense(space.size()), target.dense(space.size()), 1e-9);

  MCPReport report;
  report.t_samples = options.t_samples.empty() ? default_t_samples() : options.t_samples;
  report.allowance = options.allowance >= 0.0 ? options.allowance : default_mcp_allowance(space);
  std::vector<std::size_t> unique_a(A.begin(), A.end());
  std::sort(unique_a.begin(), unique_a.end());
  unique_a.erase(std::unique(unique_a.begin(), unique_a.end()), unique_a.end());
  const double mA = space.mass_of(unique_a);

  const std::size_t T = report.t_samples.size();
  report.samples.resize(T);
  std::vector<std::vector<MCPRecord>> records(options.keep_records ? T : 0);
  parallel_for(T, [&](std::size_t s) {
    const double t = report.t_samples[s];
    require(t >= 0.0 && t <= 1.0, "sample time outside [0,1]");
    GeodesicPlan weighted = plan;
    for (auto& atom : weighted.atoms) atom.mass *= mcp_coefficient(t, atom.geodesic.length) * mA;
    const auto lhs = pushforward_at(weighted, t, space, options.mode);
    MCPSample sample{t, std::numeric_limits<double>::infinity(), 0, 0.0};
    for (std::size_t c = 0; c < space.size(); ++c) {
      const double slack = space.weight(c) - lhs[c];
      sample.lhs_mass += lhs[c];
      if (slack < sample.worst_slack) {
        sample.worst_slack = slack;
        sample.worst_cell = c;
      }
      if (options.keep_records) records[s].push_back({t, c, lhs[c], space.weight(c), slack});
    }
    report.samples[s] = sample;
  });

  report.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < T; ++s) {
    if (report.samples[s].worst_slack < report.worst_slack) {
      report.worst_slack = report.samples[s].worst_slack;
      report.worst_t = report.samples[s].t;
      report.worst_cell = report.samples[s].worst_cell;
    }
    if (options.keep_records) {
      report.records.insert(report.records.end(), records[s].begin(), records[s].end());
    }
  }
  report.pass = report.worst_slack + report.allowance >= 0.0;
  return report;
}

double height(const NecklaceLayout& layout, double w, const std::vector<std::size_t>& cells) {
  const std::set<std::size_t> in(cells.begin(), cells.end());
  for (const auto& bead : layout.fibers) {
    for (const auto& fiber : bead) {
      if (std::abs(fiber.x - w) > 1e-9) continue;
      double h = 0.0;
      for (std::size_t c : fiber.cells) {
        if (in.count(c)) h += layout.cells[c].dy;
      }
      return h;
    }
  }
  for (std::size_t c : layout.segment_cells) {
    if (std::abs(layout.cells[c].x - w) <= 1e-9) return 0.0;
  }
  fail(ErrorCode::kPrecondition, "abscissa is not on the necklace grid");
}

double diamond_height(const NecklaceLayout& layout, std::size_t bead, double w) {
  require(bead < layout.params.beads.size(), "bead index out of range");
  return 2.0 * diamond_half_height(layout.params.beads[bead], w);
}

ScheduleGeometry schedule_geometry(const NecklaceLayout& layout, const ScheduleParams& params) {
  require(layout.params.beads.size() >= 2, "the schedule needs a necklace with two beads");
  require(params.source < layout.cells.size(), "source cell out of range");
  const NecklaceCell& src = layout.cells[params.source];
  require(src.bead == 0, "source must lie in the first diamond");
  require(params.target_fiber < layout.fibers[1].size(), "target fiber out of range");
  const std::size_t m = layout.params.fiber_cells;
  std::vector<std::size_t> ycells = params.target_ycells;
  std::sort(ycells.begin(), ycells.end());
  require(!ycells.empty(), "A_{x'} must be nonempty");
  require(std::adjacent_find(ycells.begin(), ycells.end()) == ycells.end(),
          "target y-cells must be distinct");
  require(ycells.back() < m, "target y-cell out of range");

  const Bead& b1 = layout.params.beads[0];
  const Bead& b2 = layout.params.beads[1];
  const auto& fibers1 = layout.fibers[0];
  const NecklaceFiber& target = layout.fibers[1][params.target_fiber];

  ScheduleGeometry g;
  g.x_tilde = src.x;
  g.y_tilde = src.y;
  g.x_prime = target.x;
  require(g.x_tilde < g.x_prime, "source must lie left of the target fiber");
  g.x_hat = (b1.r / 4.0 + 4.0 * (g.x_tilde - b1.x)) / 5.0 + b1.x;
  const double span = g.x_prime - g.x_tilde;
  g.t_hat = (g.x_hat - g.x_tilde) / span;
  g.t1 = (b1.x + b1.r / 4.0 - g.x_tilde) / span;
  g.t2 = (b2.x - b2.r / 4.0 - g.x_tilde) / span;

  std::size_t hat = 0;
  for (std::size_t f = 1; f < fibers1.size(); ++f) {
    if (std::abs(fibers1[f].x - g.x_hat) < std::abs(fibers1[hat].x - g.x_hat)) hat = f;
  }
  hat = std::max(hat, src.fiber + 1);
  require(hat < fibers1.size(), "source sits on the last fiber of the first diamond");
  g.hat_fiber = hat;
  g.hat_offset = (m - ycells.size()) / 2;
  for (std::size_t y : ycells) g.target_cells.push_back(target.cells[y]);
  return g;
}

GeodesicPlan necklace_schedule(const FiniteMMS& space, const ScheduleParams& params) {
  const NecklaceLayout layout = necklace_layout(space);
  const ScheduleGeometry g = schedule_geometry(layout, params);
  const std::size_t m = layout.params.fiber_cells;
  const NecklaceCell& src = layout.cells[params.source];
  const auto& fibers1 = layout.fibers[0];
  const auto& fibers2 = layout.fibers[1];
  const Bead& b1 = layout.params.beads[0];
  const Bead& b2 = layout.params.beads[1];
  const double right1 = b1.x + b1.r / 4.0;
  const double left2 = b2.x - b2.r / 4.0;
  const double span = g.x_prime - g.x_tilde;
  const double x_hat_fiber = fibers1[g.hat_fiber].x;

  std::vector<std::size_t> ycells = params.target_ycells;
  std::sort(ycells.begin(), ycells.end());
  const double mass = 1.0 / static_cast<double>(ycells.size());

  GeodesicPlan plan;
  for (std::size_t j = 0; j < ycells.size(); ++j) {
    const std::size_t hat_cell = fibers1[g.hat_fiber].cells[g.hat_offset + j];
    const double y_hat = layout.cells[hat_cell].y;
    std::vector<std::size_t> nodes{params.source};
    for (std::size_t f = src.fiber + 1; f < fibers1.size(); ++f) {
      const NecklaceFiber& fiber = fibers1[f];
      if (f < g.hat_fiber) {
        const double s = (fiber.x - g.x_tilde) / (x_hat_fiber - g.x_tilde);
        const double y = g.y_tilde + s * (y_hat - g.y_tilde);
        const double dy = 2.0 * fiber.half_height / static_cast<double>(m);
        const double pos = std::floor((y + fiber.half_height) / dy);
        const auto cell = static_cast<std::size_t>(
            std::clamp(pos, 0.0, static_cast<double>(m - 1)));
        nodes.push_back(fiber.cells[cell]);
      } else {
        nodes.push_back(fiber.cells[g.hat_offset + j]);
      }
    }
    for (std::size_t c : layout.segment_cells) {
      const double x = layout.cells[c].x;
      if (x > right1 && x < left2) nodes.push_back(c);
    }
    for (std::size_t f = 0; f <= params.target_fiber; ++f) {
      nodes.push_back(fibers2[f].cells[ycells[j]]);
    }

    DiscreteGeodesic geo;
    geo.nodes = std::move(nodes);
    geo.length = space.d(geo.front(), geo.back());
    for (std::size_t v : geo.nodes) geo.times.push_back((layout.cells[v].x - g.x_tilde) / span);
    geo.times.front() = 0.0;
    geo.times.back() = 1.0;
    plan.atoms.push_back({std::move(geo), mass});
  }
  return plan;
}

ScheduleReport schedule_density_check(const FiniteMMS& space, const GeodesicPlan& plan,
                                      const ScheduleParams& params,
                                      std::vector<double> t_samples, double allowance) {
  const NecklaceLayout layout = necklace_layout(space);
  ScheduleReport r;
  r.geometry = schedule_geometry(layout, params);
  const ScheduleGeometry& g = r.geometry;
  if (t_samples.empty()) t_samples = default_t_samples({g.t_hat, g.t1, g.t2});
  r.allowance = allowance >= 0.0 ? allowance : 8.0 * space.meta().pitch;

  const auto n1 = pushforward_at(plan, 1.0, space);
  r.samples.resize(t_samples.size());
  parallel_for(t_samples.size(), [&](std::size_t s) {
    const double t = t_samples[s];
    ScheduleSample sample{t, 0.0, 0};
    if (t > 0.0) {
      const auto nt = pushforward_at(plan, t, space);
      for (const auto& atom : plan.atoms) {
        const DiscreteGeodesic& geo = atom.geodesic;
        const std::size_t c = evaluate(geo, t);
        const std::size_t c1 = geo.back();
        const double lhs =
            nt[c] * layout.cells[c].dx / (t * layout.cells[c1].dx * space.weight(c));
        const double l = geo.length;
        const double factor = l < 1e-8 ? 1.0 / (t * t * t) : sin2(l) / (t * sin2(t * l));
        const double rhs = factor * n1[c1] / space.weight(c1);
        const double ratio = lhs / rhs;
        if (ratio > sample.worst_ratio) {
          sample.worst_ratio = ratio;
          sample.worst_cell = c;
        }
      }
    }
    r.samples[s] = sample;
  });
  for (const auto& s : r.samples) {
    if (s.worst_ratio > r.worst_ratio) {
      r.worst_ratio = s.worst_ratio;
      r.worst_t = s.t;
    }
  }
  r.pass = r.worst_ratio <= 1.0 + r.allowance;

  const Bead& b1 = layout.params.beads[0];
  const double span = g.x_prime - g.x_tilde;
  const double h_hat = diamond_half_height(b1, g.x_hat);
  std::vector<double> early;
  for (int i = 0; i <= 100; ++i) early.push_back(g.t_hat * i / 100.0);
  for (double t : t_samples) {
    if (t <= g.t_hat) early.push_back(t);
  }
  r.height_bound_worst_margin = std::numeric_limits<double>::infinity();
  for (double t : early) {
    const double s = t / g.t_hat;
    const double ratio = diamond_half_height(b1, g.x_tilde + t * span) / h_hat;
    r.height_bound_worst_margin = std::min(r.height_bound_worst_margin, 1.25 - 0.25 * s - ratio);
  }
  r.height_bound_holds = r.height_bound_worst_margin >= -1e-12;

  if (!plan.atoms.empty() && g.t_hat > 0.0) {
    const auto nt = pushforward_at(plan, g.t_hat, space);
    const DiscreteGeodesic& geo = plan.atoms.front().geodesic;
    const std::size_t c = evaluate(geo, g.t_hat);
    const std::size_t c1 = geo.back();
    r.chain_lhs = nt[c] * layout.cells[c].dx /
                  (g.t_hat * layout.cells[c1].dx * space.weight(c));
    const double x_t = g.x_tilde + g.t_hat * span;
    const double cos_ratio = std::pow(std::cos(g.x_prime) / std::cos(x_t), 2);
    r.chain_rhs = (g.t_hat / (g.t_hat * g.t_hat)) *
                  (diamond_half_height(b1, x_t) / h_hat) * cos_ratio *
                  n1[c1] / space.weight(c1);
  }

  for (const auto& atom : plan.atoms) r.max_length = std::max(r.max_length, atom.geodesic.length);
  r.in_scalar_domain = r.max_length <= kPi / 2.0 + 0.25 && g.t_hat <= 0.2;
  return r;
}

}  // namespace mmslab
