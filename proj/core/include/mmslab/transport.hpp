#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mmslab/geodesic.hpp"
#include "mmslab/space.hpp"

namespace mmslab {

// Finitely supported measure on the points of a space.
struct Measure {
  std::vector<std::size_t> points;
  std::vector<double> mass;

  double total() const;
  std::vector<double> dense(std::size_t n) const;
};

// Merges repeated points, drops zero atoms and sorts by point index.
// Throws on negative or non-finite masses.
Measure canonical(const Measure& mu);

Measure dirac(std::size_t p, double mass = 1.0);

// Normalized restriction of the space's measure to the given points.
Measure normalized_restriction(const FiniteMMS& space, const std::vector<std::size_t>& points);

Measure from_dense(const std::vector<double>& masses, double threshold = 0.0);

struct CouplingEntry {
  std::size_t i = 0;  // source point
  std::size_t j = 0;  // target point
  double mass = 0.0;
};

struct Coupling {
  Measure source;
  Measure target;
  std::vector<CouplingEntry> entries;  // sorted by (i, j), positive masses only
  double cost = 0.0;                   // sum of mass * d(i, j)^2
};

// Largest row or column residual against the stored marginals.
double marginal_residual(const Coupling& coupling);

double coupling_cost(const FiniteMMS& space, const std::vector<CouplingEntry>& entries);

struct W2Result {
  double cost = 0.0;
  Coupling coupling;
};

// Exact squared Wasserstein distance by the transportation simplex.
// Throws if the supports are empty or the total masses differ by more
// than 1e-9 (relative).
W2Result solve_w2(const FiniteMMS& space, const Measure& mu0, const Measure& mu1);

// Minimum cost over all basic feasible couplings, enumerated as spanning
// trees of the support bipartite graph. Supports of at most 5 points each;
// larger inputs throw Error(kBudgetExceeded).
double brute_force_w2(const FiniteMMS& space, const Measure& mu0, const Measure& mu1);

struct PlanAtom {
  DiscreteGeodesic geodesic;
  double mass = 0.0;
};

struct GeodesicPlan {
  std::vector<PlanAtom> atoms;

  double total_mass() const;
};

// (e_0, e_1) pushforward, aggregated and sorted by (i, j).
std::vector<CouplingEntry> endpoint_coupling(const GeodesicPlan& plan);

// One geodesic per positive entry (the first chain geodesics_between finds).
GeodesicPlan lift_to_geodesic_plan(const FiniteMMS& space, const Coupling& coupling,
                                   std::size_t budget = 1, GeodesicOptions options = {});

enum class PushforwardMode {
  kNearest,  // whole atom mass at evaluate(g, t)
  kLinear,   // mass split between the two nodes bracketing t
};

// Dense (e_t)_# plan over the points of the space.
std::vector<double> pushforward_at(const GeodesicPlan& plan, double t, const FiniteMMS& space,
                                   PushforwardMode mode = PushforwardMode::kNearest);

struct UniquenessVerdict {
  bool unique = true;
  double optimal_cost = 0.0;
  Coupling first;
  std::optional<Coupling> witness;
  double witness_cost_gap = 0.0;   // |cost(witness) - optimal_cost|
  double witness_distance = 0.0;   // max entry-wise difference to `first`
};

// Solves once, then minimizes the mass on the first solution's support over
// the optimal face (cells of zero reduced cost). The first solution is a
// vertex, so it is the only optimal coupling supported inside its own
// support; any other optimum moves mass off it.
UniquenessVerdict uniqueness_probe(const FiniteMMS& space, const Measure& mu0,
                                   const Measure& mu1, double tol = 1e-9);

// True iff each source point sends more than tol mass to at most one target.
bool is_induced_by_map(const Coupling& coupling, double tol = 1e-12);

// mu_1 = (delta_x + delta_{f(x)}) / 2.
Measure point_pair_target(std::size_t x, std::size_t fx);

// mu_1 = (m|B_r(x) / m(B_r(x)) + m|B_r(f x) / m(B_r(f x))) / 2 with open balls.
Measure ball_pair_target(const FiniteMMS& space, std::size_t x, std::size_t fx, double r);

// Competitor plan for an isometry f that fixes the plan's sources: atoms
// ending in `first_half` are mapped node-wise by f, atoms ending in
// f(first_half) by f^{-1}. Preconditions: f is an isometry (distortion
// <= iso_tol), the sources lie in Fix(f) (within fix_tol), the targets lie in
// first_half or its image, and first_half is disjoint from its image.
GeodesicPlan symmetrized_competitor(const FiniteMMS& space, const std::vector<std::size_t>& f,
                                    const GeodesicPlan& plan,
                                    const std::vector<std::size_t>& first_half,
                                    double fix_tol = -1.0, double iso_tol = -1.0);

// The single-point form: first_half = {x}. Rejects x in Fix(f).
GeodesicPlan symmetrized_competitor(const FiniteMMS& space, const std::vector<std::size_t>& f,
                                    const GeodesicPlan& plan, std::size_t x,
                                    double fix_tol = -1.0, double iso_tol = -1.0);

struct CompetitorReport {
  bool marginals_equal = false;
  bool cost_equal = false;
  bool distinct = false;
  double marginal_defect = 0.0;  // max over points of both marginal differences
  double cost_defect = 0.0;      // |sum mass * length^2| difference
  double plan_distance = 0.0;    // L1 distance between the plans as measures on chains
};

CompetitorReport verify_competitor(const FiniteMMS& space, const GeodesicPlan& plan,
                                   const GeodesicPlan& competitor, double tol = 1e-9);

}  // namespace mmslab
