#include "tvnet/threading.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace tvnet {

namespace {
std::atomic<int> g_max_threads{static_cast<int>(std::thread::hardware_concurrency())};
thread_local bool tl_inside_worker = false;
} // namespace

void set_max_threads(int n) {
    g_max_threads.store(n < 1 ? 1 : n);
}

int max_threads() {
    int n = g_max_threads.load();
    return n < 1 ? 1 : n;
}

void parallel_for(int count, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    int workers = std::min(max_threads(), count);
    if (workers <= 1 || tl_inside_worker) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    auto body = [&]() {
        tl_inside_worker = true;
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count || failed.load()) break;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                break;
            }
        }
    };
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace tvnet
