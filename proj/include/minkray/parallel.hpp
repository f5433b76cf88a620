#pragma once

#include <cstddef>
#include <functional>

namespace minkray {

// Worker count used by parallel_for. Defaults to MINKRAY_THREADS, else 1.
int thread_count();
void set_thread_count(int n);

// Splits [0, n) into thread_count() contiguous chunks, fixed by n and the
// thread count alone. Callers write disjoint outputs per index, so results do
// not depend on the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace minkray
