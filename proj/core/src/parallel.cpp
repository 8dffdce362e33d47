#include "bifconj/parallel.hpp"

#include <cstdlib>
#include <string>

namespace bifconj {

unsigned worker_count() {
    if (const char* env = std::getenv("BIFCONJ_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace bifconj
