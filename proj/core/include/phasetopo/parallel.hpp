#pragma once

#include <cstddef>
#include <functional>

namespace phasetopo {

/// Number of workers to use for `requested` threads; 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested);

/// Calls body(i) for every i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; if any call throws, the exception from the lowest failing
/// index is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace phasetopo
