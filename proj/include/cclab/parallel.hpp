#ifndef CCLAB_PARALLEL_HPP
#define CCLAB_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace cclab {

// Runs fn(0..count-1) on up to `workers` threads. Tasks write to preassigned
// slots and seeds derive from task keys, so results never depend on the
// worker count or interleaving. workers <= 1 runs inline.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace cclab

#endif
