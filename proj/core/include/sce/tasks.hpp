#pragma once

#include <cstddef>
#include <functional>

namespace sce {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; the first exception thrown is rethrown after all
/// workers join. threads == 0 uses the hardware concurrency.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace sce
