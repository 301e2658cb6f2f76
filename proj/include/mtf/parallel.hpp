#pragma once

#include <cstddef>
#include <functional>

namespace mtf {

// Worker count: MTF_THREADS if set and positive, else the hardware count.
std::size_t thread_count();

// Calls body(i) for i in [0, n), split into contiguous blocks across threads.
// Each index is visited exactly once; callers write results by index so the
// outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mtf
