#pragma once

#include <functional>

namespace biot {

/// Worker count from BIOTDD_THREADS (default 1, clamped to >= 1).
int thread_count();

/// Runs fn(0..n-1) on up to `threads` workers; rethrows the first exception.
/// Each index runs exactly once and callers write to disjoint outputs, so
/// results do not depend on scheduling.
void parallel_for(int n, const std::function<void(int)>& fn, int threads = thread_count());

}  // namespace biot
