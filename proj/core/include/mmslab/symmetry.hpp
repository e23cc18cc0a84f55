#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mmslab/space.hpp"

namespace mmslab {

using Permutation = std::vector<std::size_t>;

Permutation identity_permutation(std::size_t n);
Permutation compose(const Permutation& f, const Permutation& g);  // f after g
Permutation inverse(const Permutation& f);
bool is_identity(const Permutation& f);

struct IsometryMap {
  Permutation perm;
  double distortion = 0.0;      // max |d(g i, g j) - d(i, j)|
  double measure_defect = 0.0;  // max |w(g i) - w(i)|
  bool measure_preserving = false;
};

// Distortion and measure defect of a permutation. Throws if perm is not a
// bijection of the space's points.
IsometryMap make_isometry(const FiniteMMS& space, const Permutation& perm,
                          double meas_tol = 1e-9);

// 1e-9 * max(1, diameter).
double default_iso_tol(const FiniteMMS& space);

struct EnumerationOptions {
  double iso_tol = -1.0;             // < 0 selects default_iso_tol
  double meas_tol = 1e-9;
  std::size_t node_budget = 50'000'000;  // search nodes over all workers
  std::size_t max_maps = 1u << 20;
};

struct Enumeration {
  std::vector<IsometryMap> maps;  // sorted by permutation
  bool complete = false;
  std::size_t nodes = 0;
  double iso_tol = 0.0;
};

// Backtracking over images compatible with sorted distance rows. Points are
// assigned in an order that keeps each new point close to assigned ones,
// so that pairwise checks prune early.
Enumeration enumerate_isometries(const FiniteMMS& space, const EnumerationOptions& options = {});

struct FixedSet {
  std::vector<std::size_t> cells;
  double measure = 0.0;
};

FixedSet fixed_set(const FiniteMMS& space, const Permutation& g, double fix_tol);

// m(Fix(g) cap B_s(x)) with the open ball.
double fixed_mass_in_ball(const FiniteMMS& space, const FixedSet& fix, std::size_t x, double s);

struct Subgroup {
  std::vector<Permutation> elements;  // sorted; contains the identity
  std::vector<Permutation> generators;
  bool closed = false;
};

// Closure of the generators under composition, truncated at `budget`
// elements (then closed = false).
Subgroup generate_subgroup(const std::vector<Permutation>& gens, std::size_t budget = 1u << 16);

// sup over g in group and y in the open ball B_{r/2}(x) of d(y, g y).
double displacement(const FiniteMMS& space, const Subgroup& group, double r, std::size_t x);

// sup over y in K of d(y, g y).
double displacement_on(const FiniteMMS& space, const Permutation& g,
                       const std::vector<std::size_t>& K);

struct ProbeResult {
  bool found = false;
  bool inconclusive = false;  // enumeration was truncated
  Subgroup group;
  double group_displacement = 0.0;
  std::size_t candidates = 0;  // nontrivial maps inside the filter
};

// Nontrivial enumerated maps moving every point of K by less than eps are
// tried in order of increasing displacement; the first one whose generated
// subgroup stays inside the filter is returned.
ProbeResult small_subgroup_probe(const FiniteMMS& space, double eps,
                                 const std::vector<std::size_t>& K,
                                 const EnumerationOptions& options = {});

struct EuclideanIsometry {
  Eigen::MatrixXd Q;  // orthogonal
  Eigen::VectorXd v;  // y -> Q y + v
};

// sup over |y| <= radius of |A y + w| (convex maximization over a ball,
// solved through the eigendecomposition of A^T A and a secular equation).
double sup_affine_norm(const Eigen::MatrixXd& A, const Eigen::VectorXd& w, double radius);

// sup over |y| <= 1/2 of |g^n y - y|.
double power_displacement(const EuclideanIsometry& g, std::size_t n);

struct EscapeResult {
  bool found = false;
  std::size_t n = 0;
  double displacement = 0.0;  // of g^n, or of g^max_pow on failure
  double initial_displacement = 0.0;
};

// Random rotation about a random point composed with a small translation,
// resampled until power_displacement(g, 1) lies in (lo, hi). k is 2 or 3.
EuclideanIsometry random_small_isometry(std::mt19937_64& rng, int k, double lo, double hi);

// Smallest n <= max_pow with sup_{|y| <= 1/2} |g^n y - y| >= threshold.
EscapeResult euclidean_power_escape(const EuclideanIsometry& g, double threshold = 0.05,
                                    std::size_t max_pow = 1'000'000);

struct ConditionAReport {
  double fix_sup = 0.0;          // max over nontrivial g of m(Fix(g) cap B_s(x))
  double fix_sup_normalized = 0.0;
  double ball_mass = 0.0;
  double gap = 0.0;              // ball_mass - fix_sup
  bool no_nontrivial = false;
  bool complete = false;
  bool holds = false;            // complete and fix_sup < ball_mass
  std::size_t argmax = 0;        // index into the enumeration
  Enumeration enumeration;
};

ConditionAReport condition_a_scan(const FiniteMMS& space, std::size_t x, double s,
                                  double fix_tol = -1.0, const EnumerationOptions& options = {});

struct LargeFixReport {
  double xi = 0.0;              // m(B_N)^-1 min_y m(B_{1/N}(y) cap B_N)
  double min_small_ball = 0.0;  // min_y m(B_{1/N}(y) cap B_N)
  double moved_mass = 0.0;      // m((X \ Fix f) cap B_N)
  bool hypothesis = false;      // moved_mass < min_small_ball
  double max_displacement = 0.0;
  double bound = 0.0;           // 2/N + pitch
  bool conclusion = false;      // max_displacement < bound
  bool implication_holds = false;
};

LargeFixReport large_fix_implies_small_displacement(const FiniteMMS& space, const Permutation& f,
                                                    std::size_t x, std::size_t N,
                                                    double fix_tol = -1.0);

struct CriticalScale {
  bool found = false;
  double lo = 0.0;  // D(lo) >= lo/20
  double hi = 0.0;  // D(hi) < hi/20
  double defect = 0.0;
  double r = 0.0;
};

// Bisection on D(r) - r/20 over [lo, hi] down to width tol.
CriticalScale critical_scale(const FiniteMMS& space, const Subgroup& group, std::size_t x,
                             double lo, double hi, double tol);

}  // namespace mmslab
