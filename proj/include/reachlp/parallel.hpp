#pragma once

#include <cstddef>
#include <functional>

namespace reachlp {

// 0 resolves to the hardware thread count (at least 1).
unsigned resolve_thread_count(unsigned requested);

// Runs body(index, worker) for index in [0, count). Work items must be
// independent; results written to preallocated slots keyed by index are
// bitwise identical to a sequential run regardless of scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, unsigned)>& body);

}  // namespace reachlp
