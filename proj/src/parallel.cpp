#include "zerocorr/parallel.hpp"

#include <cstdlib>
#include <string>

namespace zerocorr {

unsigned resolve_workers(unsigned requested) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv(kWorkerCapVariable)) {
        try {
            const long v = std::stol(cap);
            if (v >= 1) n = std::min(n, static_cast<unsigned>(v));
        } catch (const std::exception&) {
            // ignore malformed caps
        }
    }
    return n;
}

} // namespace zerocorr
