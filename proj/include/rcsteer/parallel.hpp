#pragma once

#include <cstddef>
#include <functional>

namespace rcsteer {

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Work items must be independent; the first exception thrown
/// by any item is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

std::size_t resolve_threads(std::size_t requested);

}  // namespace rcsteer
