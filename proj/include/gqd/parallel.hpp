#pragma once

#include <cstddef>
#include <functional>

namespace gqd {

/// Worker count: GQD_THREADS if set (>= 1), otherwise hardware concurrency.
unsigned worker_count();

/// Calls body(i) for i in [0, n) over contiguous blocks on up to worker_count()
/// threads. body must only write to slots it owns. Exceptions from workers are
/// rethrown on the calling thread (the first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace gqd
