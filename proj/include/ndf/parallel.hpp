#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ndf {

inline unsigned default_threads() {
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(task) for task in [0, tasks) on up to `threads` workers. Task i is
/// always the same unit of work, so callers that reduce per-task results in
/// index order get the same answer for any thread count. The first exception
/// thrown by a task is rethrown here.
template <class Fn>
void parallel_tasks(std::size_t tasks, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || tasks <= 1) {
        for (std::size_t i = 0; i < tasks; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, tasks);
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < tasks; i += workers) fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace ndf
