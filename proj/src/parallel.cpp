#include "debiaskf/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

#include "debiaskf/errors.hpp"

namespace debiaskf {

int thread_cap() {
    if (const char* env = std::getenv("DEBIASKF_THREADS")) {
        const int n = std::atoi(env);
        if (n < 1) throw ConfigError("DEBIASKF_THREADS must be >= 1");
        return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    const int workers = std::min(n, thread_cap());
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    errors[static_cast<size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace debiaskf
