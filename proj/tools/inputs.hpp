#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mmslab/space.hpp"
#include "mmslab/symmetry.hpp"
#include "mmslab/transport.hpp"
#include "report.hpp"

namespace mmslab::cli {

// Point sets:
//   all | ids:1,4,7-9 | ball:<center>:<radius> | label:<name>
//   | predicates on coordinates such as "x>=0.785,x<=1.0,y>0"
std::vector<std::size_t> parse_set(const std::string& spec, const FiniteMMS& space);

// Measures: a JSON file {"atoms": [{"point": i, "mass": m}, ..]}, a point
// index "3", weighted atoms "3:0.5,7:0.5", or "uniform:<set>" for the
// normalized restriction of the space's measure.
Measure parse_measure(const std::string& spec, const FiniteMMS& space);

// Maps: a JSON file {"perm": [..]}, "reflection:<k>" on an earring, or
// "enum:<i>" for the i-th enumerated isometry.
Permutation parse_map(const std::string& spec, const FiniteMMS& space);

std::vector<int> parse_ints(const std::string& spec);
std::vector<double> parse_doubles(const std::string& spec);

json to_json(const Measure& mu);
json to_json(const std::vector<CouplingEntry>& entries);

}  // namespace mmslab::cli
