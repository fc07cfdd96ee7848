#include "debiaskf/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "debiaskf/errors.hpp"

namespace debiaskf::kernels {

namespace {

bool cpu_has_avx2() {
#if DEBIASKF_HAVE_AVX2_BUILD
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend resolve_from_env() {
    const char* env = std::getenv("DEBIASKF_SIMD");
    const std::string want = env ? env : "auto";
    if (want == "scalar") return Backend::scalar;
    if (want == "avx2") {
        if (!cpu_has_avx2()) throw FilterError("DEBIASKF_SIMD=avx2 but CPU lacks AVX2");
        return Backend::avx2;
    }
    if (want != "auto") throw FilterError("DEBIASKF_SIMD must be scalar, avx2, or auto (got '" + want + "')");
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<int> g_backend{-1};

Backend backend() {
    int b = g_backend.load(std::memory_order_relaxed);
    if (b < 0) {
        b = static_cast<int>(resolve_from_env());
        g_backend.store(b, std::memory_order_relaxed);
    }
    return static_cast<Backend>(b);
}

}  // namespace

Backend active_backend() { return backend(); }

const char* backend_name() {
    return backend() == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
    if (b == Backend::avx2 && !cpu_has_avx2()) throw FilterError("CPU lacks AVX2");
    g_backend.store(static_cast<int>(b), std::memory_order_relaxed);
}

#if DEBIASKF_HAVE_AVX2_BUILD
#define DEBIASKF_DISPATCH(fn, ...)                        \
    do {                                                  \
        if (backend() == Backend::avx2)                   \
            return avx2::fn(__VA_ARGS__);                 \
        return scalar::fn(__VA_ARGS__);                   \
    } while (0)
#else
#define DEBIASKF_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void gemm_nn(const double* A, const double* B, double* C, int m, int k, int n) {
    DEBIASKF_DISPATCH(gemm_nn, A, B, C, m, k, n);
}
void gemm_tn(const double* A, const double* B, double* C, int k, int m, int n) {
    DEBIASKF_DISPATCH(gemm_tn, A, B, C, k, m, n);
}
void gemm_nt(const double* A, const double* B, double* C, int m, int k, int n) {
    DEBIASKF_DISPATCH(gemm_nt, A, B, C, m, k, n);
}
void add(const double* a, const double* b, double* c, int len) { DEBIASKF_DISPATCH(add, a, b, c, len); }
void sub(const double* a, const double* b, double* c, int len) { DEBIASKF_DISPATCH(sub, a, b, c, len); }
void scale(const double* a, double s, double* c, int len) { DEBIASKF_DISPATCH(scale, a, s, c, len); }

#undef DEBIASKF_DISPATCH

}  // namespace debiaskf::kernels
