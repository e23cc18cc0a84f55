#pragma once

#include <cstddef>
#include <vector>

#include "mmslab/space.hpp"

namespace mmslab {

// [0, pi/2] with density cos^2(x): cell midpoints, weight cos^2(x_i) * h.
FiniteMMS segment_space(double pitch);

// Circle of the given radius with arc-length distance and uniform weights.
FiniteMMS circle_space(double radius, std::size_t count);

// Wedge of the circles of radius 1/k^2, k = 1..n, at a shared base point.
// Index 0 is the base point; cell j (1 <= j < res) of circle k is
// hawaiian_index(res, k, j). Cells carry their arc length; the base point
// carries one cell length per circle.
FiniteMMS hawaiian_truncation(std::size_t n, std::size_t res);

std::size_t hawaiian_index(std::size_t res, std::size_t k, std::size_t j);

// Permutation reflecting circle k of H_n (j <-> res - j), identity elsewhere.
std::vector<std::size_t> hawaiian_reflection(std::size_t n, std::size_t res, std::size_t k);

struct Bead {
  double x = 0.0;  // diamond center
  double r = 0.0;  // size; the diamond spans [x - r/4, x + r/4]
};

struct NecklaceParams {
  std::vector<Bead> beads;
  double pitch = 0.0;
  std::size_t fiber_cells = 8;
};

// Throws Error(kPrecondition) unless 0 < r_k <= 1,
// r_k/4 <= x_k <= pi/2 - r_k/4, the diamonds are disjoint and pitch > 0.
void check_necklace_params(const NecklaceParams& params);

struct NecklaceCell {
  double x = 0.0;   // fiber abscissa (cell midpoint)
  double y = 0.0;   // cell midpoint height; 0 on the segment part
  double dx = 0.0;  // cell width
  double dy = 0.0;  // cell height; 0 on the segment part
  int bead = -1;    // diamond index, -1 on the segment part
  std::size_t fiber = 0;  // fiber index within the bead
  std::size_t ycell = 0;  // position within the fiber, bottom to top
};

struct NecklaceFiber {
  double x = 0.0;
  double half_height = 0.0;
  std::vector<std::size_t> cells;  // bottom to top
};

struct NecklaceLayout {
  NecklaceParams params;
  std::vector<NecklaceCell> cells;                 // one per point
  std::vector<std::vector<NecklaceFiber>> fibers;  // per bead, left to right
  std::vector<std::size_t> segment_cells;          // left to right
};

// Half-height of diamond k at abscissa x (0 outside the diamond).
double diamond_half_height(const Bead& bead, double x);

NecklaceLayout necklace_layout(const NecklaceParams& params);

// Recovers the layout of a space produced by necklace() or segment_space().
NecklaceLayout necklace_layout(const FiniteMMS& space);

// Diamond cells of width <= pitch, split into fiber_cells equal y-cells of
// weight cos^2(x) * dx / fiber_cells; segment cells of weight cos^2(x) * dx.
// Distances are the intrinsic L-infinity length metric.
FiniteMMS necklace(const NecklaceParams& params);

// Lattice points of pitch * Z^k inside the closed ball of radius r, with
// Euclidean distance and weight pitch^k. k must be 1, 2 or 3.
FiniteMMS euclidean_ball_grid(int k, double r, double pitch);

}  // namespace mmslab
