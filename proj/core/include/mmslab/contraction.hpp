#pragma once

#include <cstddef>
#include <vector>

#include "mmslab/generators.hpp"
#include "mmslab/space.hpp"
#include "mmslab/transport.hpp"

namespace mmslab {

// t * sin^2(t l) / sin^2(l), with the l -> 0 limit t^3.
double mcp_coefficient(double t, double l);

// 33 Chebyshev-spaced times in [0, 1] (both ends included), merged with
// `extra` and sorted.
std::vector<double> default_t_samples(const std::vector<double>& extra = {});

struct ScalarBoundReport {
  bool holds = false;
  double min_margin = 0.0;  // min of t sin^2(d)/sin^2(t d) - (5/4 - t/4)
  double argmin_t = 0.0;
  double argmin_d = 0.0;
  std::size_t t_grid = 0;
  std::size_t d_grid = 0;
};

// Uniform grid over [t_lo, t_hi] x [d_lo, d_hi]; holds iff every margin is
// at least -1e-12.
ScalarBoundReport scalar_bound_check(std::size_t t_grid, std::size_t d_grid,
                                     double t_lo = 1e-9, double t_hi = 0.2,
                                     double d_lo = 1e-6, double d_hi = 1.8207963267948966);

struct MCPRecord {
  double t = 0.0;
  std::size_t cell = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

struct MCPSample {
  double t = 0.0;
  double worst_slack = 0.0;
  std::size_t worst_cell = 0;
  double lhs_mass = 0.0;
};

struct MCPReport {
  std::vector<double> t_samples;
  std::vector<MCPSample> samples;
  std::vector<MCPRecord> records;  // filled when requested
  double worst_slack = 0.0;
  double worst_t = 0.0;
  std::size_t worst_cell = 0;
  double allowance = 0.0;
  bool pass = false;
};

struct MCPOptions {
  std::vector<double> t_samples;  // empty selects default_t_samples()
  double allowance = -1.0;        // < 0 selects default_mcp_allowance
  PushforwardMode mode = PushforwardMode::kNearest;
  bool keep_records = false;      // every (t, cell) pair
};

// Four times the largest cell weight (a per-cell mass).
double default_mcp_allowance(const FiniteMMS& space);

// Optimal plan from delta_x to the normalized restriction of m to A, lifted
// to geodesics (x-monotone chains on necklaces).
GeodesicPlan mcp_plan(const FiniteMMS& space, std::size_t x, const std::vector<std::size_t>& A);

// Per cell and sample time compares the reweighted pushforward
// sum over atoms of mass * mcp_coefficient(t, l) * m(A) with the cell weight.
// Throws if the plan's marginals differ from (delta_x, m|A / m(A)) by more
// than 1e-9 or if A leaves B(x, pi).
MCPReport mcp_check(const FiniteMMS& space, std::size_t x, const std::vector<std::size_t>& A,
                    const GeodesicPlan& plan, const MCPOptions& options = {});

// Sum of y-cell heights of `cells` on the fiber at abscissa w (0 on the
// segment part). Throws if no fiber or segment cell sits at w.
double height(const NecklaceLayout& layout, double w, const std::vector<std::size_t>& cells);

// Height of the full fiber of diamond `bead` at abscissa w.
double diamond_height(const NecklaceLayout& layout, std::size_t bead, double w);

struct ScheduleParams {
  std::size_t source = 0;                  // a cell of the first diamond
  std::size_t target_fiber = 0;            // fiber index in the second diamond
  std::vector<std::size_t> target_ycells;  // A_{x'} as y-cell positions
};

struct ScheduleGeometry {
  double x_tilde = 0.0;
  double y_tilde = 0.0;
  double x_prime = 0.0;
  double x_hat = 0.0;
  double t_hat = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  std::size_t hat_fiber = 0;  // first-diamond fiber nearest x_hat
  std::size_t hat_offset = 0; // first y-cell of the centered block at x_hat
  std::vector<std::size_t> target_cells;  // point indices of A_{x'}
};

ScheduleGeometry schedule_geometry(const NecklaceLayout& layout, const ScheduleParams& params);

// One atom per cell of A_{x'} with equal masses. x is linear in time; the
// atom fans out from the source to the centered block at x_hat, keeps its
// relative height to the end of the first diamond, runs along the segment
// and keeps the relative height of its target through the second diamond.
GeodesicPlan necklace_schedule(const FiniteMMS& space, const ScheduleParams& params);

struct ScheduleSample {
  double t = 0.0;
  double worst_ratio = 0.0;  // max over atoms of lhs / rhs
  std::size_t worst_cell = 0;
};

struct ScheduleReport {
  ScheduleGeometry geometry;
  std::vector<ScheduleSample> samples;
  double worst_ratio = 0.0;
  double worst_t = 0.0;
  double allowance = 0.0;  // relative
  bool pass = false;

  // h(x_t, D1) / h(x_hat, D1) <= 5/4 - s/4 with s = t / t_hat, for t <= t_hat.
  double height_bound_worst_margin = 0.0;
  bool height_bound_holds = false;

  // Continuum density relation evaluated at t_hat against the discrete plan.
  double chain_lhs = 0.0;
  double chain_rhs = 0.0;

  double max_length = 0.0;
  bool in_scalar_domain = false;  // max_length <= pi/2 + 1/4 and t_hat <= 1/5
};

// Densities carry the x-dilation factor 1/t: for the atom through cell c at
// time t and ending in c1,
//   n_t(c) dx(c) / (t dx(c1) w(c)) <= sin^2(l) / (t sin^2(t l)) n_1(c1) / w(c1)
// must hold up to the relative allowance (default 8 h).
ScheduleReport schedule_density_check(const FiniteMMS& space, const GeodesicPlan& plan,
                                      const ScheduleParams& params,
                                      std::vector<double> t_samples = {},
                                      double allowance = -1.0);

}  // namespace mmslab
