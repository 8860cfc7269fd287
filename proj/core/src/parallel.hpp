#pragma once

#include <cstddef>
#include <functional>

namespace fraclat::detail {

/// Worker count: FRACLAT_THREADS when set (>= 1), otherwise hardware concurrency.
unsigned thread_budget();

/// Calls body(i) for i in [0, n) on up to `threads` workers. Each index runs exactly once;
/// callers write results into per-index slots and reduce them in index order afterwards.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace fraclat::detail
