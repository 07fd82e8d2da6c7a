#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace gm4 {

// Runs fn(i) for i in [0, n) across a few worker threads.  Work items write
// only to their own slots, so results are bitwise deterministic.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const int workers = static_cast<int>(hw ? (hw > 4 ? 4 : hw) : 1);
    if (workers <= 1 || n < 2 * workers) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (int i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace gm4
