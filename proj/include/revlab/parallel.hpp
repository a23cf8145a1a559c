#pragma once

#include <cstddef>
#include <functional>

namespace revlab {

// Worker count: REVLAB_THREADS when set to a positive integer, else the
// hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n). Each index is handled by exactly one worker and
// results are expected to be written per index, so output does not depend on
// scheduling. The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace revlab
