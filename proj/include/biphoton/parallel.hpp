#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace biphoton {

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware).
/// Each index is evaluated independently, so the output does not depend on
/// scheduling. If several indices throw, the exception of the lowest index
/// is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> error_index(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            // strided assignment balances cost across the grid
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    error_index[w] = i;
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    const auto first = std::min_element(error_index.begin(), error_index.end());
    if (*first < n) std::rethrow_exception(errors[static_cast<std::size_t>(first - error_index.begin())]);
}

}  // namespace biphoton
