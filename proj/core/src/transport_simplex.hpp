#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace mmslab::detail {

// Balanced transportation problem with dense row-major costs. Forbidden
// cells (optional mask) are priced with a large penalty and must carry no
// flow in a feasible answer.
struct TransportProblem {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> supply;
  std::vector<double> demand;
  std::vector<double> cost;
  std::vector<char> forbidden;
};

struct TransportSolution {
  std::vector<double> flow;  // dense m x n
  std::vector<double> u;     // row potentials
  std::vector<double> v;     // column potentials
  std::vector<std::pair<std::size_t, std::size_t>> basis;
  std::size_t pivots = 0;
};

// Transportation simplex: northwest-corner start, Dantzig pricing with a
// switch to Bland's rule after a run of degenerate pivots. Flows are
// recomputed from the final basis tree and marginal residuals are folded
// into the largest entry of each row and column.
TransportSolution solve_transport(const TransportProblem& problem);

// Flows of a spanning tree basis (m + n - 1 cells) by leaf peeling.
std::vector<double> tree_flows(std::size_t m, std::size_t n,
                               const std::vector<std::pair<std::size_t, std::size_t>>& basis,
                               const std::vector<double>& supply,
                               const std::vector<double>& demand);

}  // namespace mmslab::detail
