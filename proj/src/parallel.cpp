#include "ortho3d/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace ortho3d {

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t k = static_cast<std::size_t>(std::max(1, resolve_workers(workers)));
    k = std::min(k, n);
    if (k == 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(k);
    std::size_t chunk = (n + k - 1) / k;
    for (std::size_t w = 0; w < k; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (auto& t : pool) t.join();
}

} // namespace ortho3d
