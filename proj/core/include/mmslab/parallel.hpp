#pragma once

#include <cstddef>
#include <functional>

namespace mmslab {

// Worker count: MMS_LAB_THREADS if set and positive, else the hardware
// concurrency (at least 1).
std::size_t worker_count();

// Runs body(i) for i in [0, n). Iterations must be independent; results
// are expected to be written into pre-sized per-index slots so that the
// outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mmslab
