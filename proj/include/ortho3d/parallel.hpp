#pragma once

#include <cstddef>
#include <functional>

namespace ortho3d {

// Resolve a worker-count setting: 0 means auto (hardware concurrency).
int resolve_workers(int workers);

// Run fn over [0, n) split into contiguous chunks, one per worker.
// The partition depends only on n and the resolved worker count, so any
// stage whose per-index work is pure produces results identical to a
// sequential run.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace ortho3d
