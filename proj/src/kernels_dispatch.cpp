#include "kernels_backends.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>

namespace pqsq::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(PQSQ_HAVE_AVX2_BACKEND) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<const Ops*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};
std::once_flag g_init;

void init_default() {
    Backend pick = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
    if (const char* env = std::getenv("PQSQ_KERNEL")) {
        if (std::strcmp(env, "scalar") == 0) pick = Backend::scalar;
        else if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) pick = Backend::avx2;
    }
    g_backend.store(pick);
    g_active.store(&backend_ops(pick));
}

}  // namespace

bool backend_available(Backend b) {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2: return cpu_has_avx2();
    }
    return false;
}

const Ops& backend_ops(Backend b) {
    switch (b) {
        case Backend::scalar: return scalar::ops;
        case Backend::avx2:
#if defined(PQSQ_HAVE_AVX2_BACKEND)
            if (cpu_has_avx2()) return avx2::ops;
#endif
            break;
    }
    throw std::invalid_argument(std::string("kernel backend not available: ") +
                                backend_name(b));
}

const Ops& active() {
    std::call_once(g_init, init_default);
    return *g_active.load();
}

Backend active_backend() {
    std::call_once(g_init, init_default);
    return g_backend.load();
}

bool set_backend(Backend b) {
    std::call_once(g_init, init_default);
    if (!backend_available(b)) return false;
    g_backend.store(b);
    g_active.store(&backend_ops(b));
    return true;
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

}  // namespace pqsq::kernels
