#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace exporamsey::detail {

// Splits [0, count) into contiguous chunks, one per worker, and runs
// body(begin, end, chunk_index). The first exception thrown is rethrown.
template <typename Body>
void parallel_chunks(std::size_t count, unsigned workers, Body body) {
    workers = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(workers, count)));
    if (workers <= 1) {
        body(std::size_t{0}, count, 0u);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t step = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(count, w * step);
        const std::size_t end = std::min(count, begin + step);
        threads.emplace_back([&, begin, end, w] {
            try {
                body(begin, end, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace exporamsey::detail
