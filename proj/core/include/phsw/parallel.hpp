#pragma once

#include <functional>

namespace phsw {

// Runs fn(i) for i in [0, count) across up to max_threads workers (0 = use
// the hardware count). Falls back to the calling thread for small ranges.
// fn must be safe to call concurrently for distinct i.
void parallel_for(int count, int max_threads, const std::function<void(int)>& fn);

}  // namespace phsw
