#include "hybridkc/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hybridkc {

std::uint32_t worker_count() {
    if (const char* env = std::getenv("HYBRID_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<std::uint32_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    const std::uint32_t workers = worker_count();
    if (jobs == 0) return;
    if (workers <= 1 || jobs == 1) {
        for (std::size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    const std::uint32_t spawn = static_cast<std::uint32_t>(
        std::min<std::size_t>(workers, jobs));
    std::vector<std::thread> pool;
    pool.reserve(spawn);
    for (std::uint32_t t = 0; t < spawn; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace hybridkc
