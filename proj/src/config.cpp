#include "exporamsey/config.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <thread>

namespace exporamsey {

unsigned worker_count(bool deterministic) {
    if (deterministic) return 1;
    if (const char* env = std::getenv("EXPORAMSEY_THREADS")) {
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), value);
        if (ec == std::errc{} && value > 0) return value;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace exporamsey
