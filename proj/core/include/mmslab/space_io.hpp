#pragma once

#include <string>

#include "mmslab/space.hpp"

namespace mmslab {

// JSON space format:
//   {"points": [{"id": 0, "coords": [..], "label": ".."}, ..],
//    "dist": [[..], ..] | {"mode": "ambient-L2" | "ambient-Linf"}
//          | {"mode": "graph", "edges": [[i, j, length], ..]},
//    "weights": [..],
//    "meta": {"generator": "..", "pitch": h, "params": {..}}}
//
// Graph mode takes shortest-path distances over the listed edges.
// Throws Error(kFormat) on malformed input and Error(kDisconnected) if a
// graph-mode space is not connected.
FiniteMMS space_from_json(const std::string& text);

// Always writes an explicit distance matrix; numbers carry 17 significant
// digits so that a round trip is exact.
std::string space_to_json(const FiniteMMS& space);

FiniteMMS read_space(const std::string& path);
void write_space(const FiniteMMS& space, const std::string& path);

}  // namespace mmslab
