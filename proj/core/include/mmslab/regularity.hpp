#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mmslab/space.hpp"

namespace mmslab {

struct GHCorrespondence {
  std::vector<std::pair<std::size_t, std::size_t>> relation;  // (i in X, j in Y)
  double distortion = 0.0;
};

double correspondence_distortion(const FiniteMMS& X, const FiniteMMS& Y,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& relation);

struct GHResult {
  double value = 0.0;  // half the distortion of the witness
  double lower = 0.0;  // equals value when exact
  bool exact = true;   // false when the node budget ran out
  std::size_t nodes = 0;
  GHCorrespondence witness;
};

// Branch and bound over minimal correspondences, which are graphs of maps
// f: X -> Y extended by one partner for every y outside f(X). Sizes above
// max_size throw Error(kBudgetExceeded). When node_budget search nodes do
// not settle the optimum, value is the best witness found and lower is
// gh_lower_bound.
GHResult gh_exact(const FiniteMMS& X, const FiniteMMS& Y, std::size_t max_size = 8,
                  std::size_t node_budget = 2'000'000);

// Half the largest of: the diameter gap, the Hausdorff distance between
// the distance sets, and the row bound (each point's distance row must lie
// within the distortion of some row on the other side).
double gh_lower_bound(const FiniteMMS& X, const FiniteMMS& Y);

// Greedy farthest-point sample of `candidates` starting at `start`
// (must be a candidate). Returns the sample and its Hausdorff radius.
std::pair<std::vector<std::size_t>, double> farthest_point_sample(
    const FiniteMMS& space, const std::vector<std::size_t>& candidates, std::size_t start,
    std::size_t count);

// Points sampled from the closed Euclidean ball of radius r in R^k,
// together with the Hausdorff radius of the sample in the ball.
std::pair<FiniteMMS, double> euclidean_ball_sample(int k, double r, std::size_t count);

enum class Verdict { kIn, kOut, kInconclusive };
const char* to_string(Verdict v);

struct ScanLevel {
  double r = 0.0;
  std::size_t ball_size = 0;
  bool degenerate = false;  // ball is a single point or the whole space
  double estimate = 0.0;    // gh_exact on the subsamples
  double estimate_lower = 0.0;  // below estimate only if gh_exact hit its budget
  double error = 0.0;       // sum of the two subsample Hausdorff radii
  double resolution = 0.0;  // pitch: slack between the cells and what they discretize
  double betweenness = 0.0; // k = 1 triple bound; exact on the sampled points
  double lower = 0.0;       // certified lower bound on d_GH(B_r(x), B_r^k)
  double upper = 0.0;       // certified upper bound
  double threshold = 0.0;   // eps * r
  Verdict status = Verdict::kInconclusive;
};

struct ScanResult {
  int k = 1;
  Verdict verdict = Verdict::kInconclusive;
  std::vector<ScanLevel> levels;
  // For kOut: lower - eps r at the failing level; for kIn: min eps r - upper.
  double margin = 0.0;
};

struct ScanOptions {
  std::size_t r_samples = 12;
  std::size_t subsample = 8;
  std::size_t triple_sample = 32;   // points used by the betweenness bound
  std::size_t embed_sample = 96;    // points embedded for k >= 2 upper bounds
  double min_pitches = 24.0;        // smallest radius in units of the pitch
  std::size_t gh_nodes = 200'000;   // gh_exact node budget per level
};

// Geometric radii in [max(delta/8, min_pitches * pitch), delta).
std::vector<double> scan_radii(const FiniteMMS& space, double delta, const ScanOptions& options);

std::vector<ScanResult> epsilon_regular_scan(const FiniteMMS& space, std::size_t x, double eps,
                                             double delta, const std::vector<int>& k_set,
                                             const ScanOptions& options = {});

struct RegularMass {
  double in = 0.0;
  double out = 0.0;
  double inconclusive = 0.0;
};

struct RegularMassReport {
  std::vector<std::size_t> scanned;  // point indices
  double scanned_mass = 0.0;
  double total_mass = 0.0;
  RegularMass overall;               // in for some k, out for every k
  std::vector<int> k_set;
  std::vector<RegularMass> per_k;
};

// Scans every ceil(n / budget)-th point; masses are sums of scanned
// weights and are not extrapolated.
RegularMassReport regular_set_measure(const FiniteMMS& space, double eps, double delta,
                                      const std::vector<int>& k_set, std::size_t budget,
                                      const ScanOptions& options = {});

}  // namespace mmslab
