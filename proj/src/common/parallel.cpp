#include "cl/common/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cl::parallel {

namespace {
std::atomic<int> g_override{0};

int from_env() {
    const char* v = std::getenv("COMPREHENSIBILITY_LAB_THREADS");
    if (!v || !*v) return 0;
    try {
        int n = std::stoi(v);
        return n > 0 ? n : 0;
    } catch (...) {
        return 0;
    }
}
}  // namespace

int thread_count() {
    if (int o = g_override.load(); o > 0) return o;
    if (int e = from_env(); e > 0) return e;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_count(int n) { g_override.store(n > 0 ? n : 0); }

}  // namespace cl::parallel
