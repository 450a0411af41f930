#ifndef RCAR_PARALLEL_HPP
#define RCAR_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rcar {

/// Resolves a requested worker count; 0 means one per hardware thread.
inline unsigned resolve_workers(unsigned requested) noexcept
{
    if (requested != 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls `fn(i)` for every i in [0, count) on a bounded pool of workers.
///
/// Jobs are handed out in fixed-size chunks from a shared counter. Results must
/// be written to per-index slots, which makes the outcome independent of the
/// worker count. The first exception thrown by any job is rethrown here.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn)
{
    workers = resolve_workers(workers);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }

    constexpr std::size_t chunk = 64;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t begin = next.fetch_add(chunk, std::memory_order_relaxed);
            if (begin >= count)
                return;
            const std::size_t end = std::min(count, begin + chunk);
            try {
                for (std::size_t i = begin; i < end; ++i)
                    fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    const auto spawned = static_cast<std::size_t>(workers) - 1;
    std::vector<std::thread> pool;
    pool.reserve(spawned);
    for (std::size_t w = 0; w < spawned; ++w)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    if (error)
        std::rethrow_exception(error);
}

} // namespace rcar

#endif // RCAR_PARALLEL_HPP
