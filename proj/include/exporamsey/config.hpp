#pragma once

#include <cstddef>
#include <cstdint>

namespace exporamsey {

/// Size policy shared by every module. All caps are in bits unless noted.
struct Caps {
    std::size_t value_bit_cap = 4096;
    std::size_t exp_bit_cap = 65536;
    std::size_t vertex_budget = 100000;
    std::size_t max_closure_depth = 4;
    std::uint64_t search_budget = 10'000'000;  // nodes for backtracking searches
};

/// Number of worker threads. EXPORAMSEY_THREADS overrides the hardware count;
/// `deterministic` forces one.
unsigned worker_count(bool deterministic);

}  // namespace exporamsey
