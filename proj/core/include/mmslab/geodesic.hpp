#pragma once

#include <cstddef>
#include <vector>

#include "mmslab/space.hpp"

namespace mmslab {

// A time-parametrized chain of points. times are strictly increasing with
// times.front() == 0 and times.back() == 1; length is d(front, back).
struct DiscreteGeodesic {
  std::vector<std::size_t> nodes;
  std::vector<double> times;
  double length = 0.0;

  std::size_t front() const { return nodes.front(); }
  std::size_t back() const { return nodes.back(); }
};

bool operator==(const DiscreteGeodesic& a, const DiscreteGeodesic& b);

// Twice the discretization pitch.
double default_geodesic_tol(const FiniteMMS& space);

// max over a < b of |d(nodes[a], nodes[b]) - (times[b] - times[a]) * length|.
double constant_speed_defect(const FiniteMMS& space, const DiscreteGeodesic& g);

// Position in g.nodes of the node whose time is nearest to t; ties go to
// the smaller time.
std::size_t evaluate_position(const DiscreteGeodesic& g, double t);

// Point index reached at time t (nearest-time rule).
std::size_t evaluate(const DiscreteGeodesic& g, double t);

// The sub-chain between the nodes nearest to s and t, reparametrized to
// [0,1] by the node times. A window that collapses to one node yields the
// constant geodesic at that node.
DiscreteGeodesic restrict(const DiscreteGeodesic& g, double s, double t);

// The constant geodesic [p, p] with times [0, 1].
DiscreteGeodesic trivial_geodesic(std::size_t p);

struct GeodesicOptions {
  double edge_factor = 1.5;
  double tol = 0.0;  // <= 0 selects default_geodesic_tol
};

// Enumerates shortest chains in the neighbor graph, whose edges join
// points within edge_factor times the larger of their nearest-neighbor
// distances and the recorded pitch. Neighbor lists are built once per finder.
class GeodesicFinder {
 public:
  explicit GeodesicFinder(const FiniteMMS& space, GeodesicOptions options = {});

  // Up to `budget` distinct chains from a to b, each verified against the
  // constant-speed invariant. Throws Error(kDisconnected) if none exists.
  std::vector<DiscreteGeodesic> between(std::size_t a, std::size_t b,
                                        std::size_t budget) const;

  double tol() const noexcept { return tol_; }
  const FiniteMMS& space() const noexcept { return *space_; }

 private:
  const FiniteMMS* space_;
  double tol_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

std::vector<DiscreteGeodesic> geodesics_between(const FiniteMMS& space, std::size_t a,
                                                std::size_t b, std::size_t budget,
                                                GeodesicOptions options = {});

}  // namespace mmslab
