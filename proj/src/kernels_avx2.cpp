// AVX2 kernels. Vectorization is across output columns with separate
// mul/add (no FMA): per element the rounding sequence matches the scalar
// reference, so results are bit-identical between backends.

#include "debiaskf/kernels.hpp"

#if DEBIASKF_HAVE_AVX2_BUILD

#include <immintrin.h>

#include <cstring>

namespace debiaskf::kernels::avx2 {

void gemm_nn(const double* A, const double* B, double* C, int m, int k, int n) {
    std::memset(C, 0, sizeof(double) * static_cast<size_t>(m) * n);
    const int n4 = n & ~3;
    for (int i = 0; i < m; ++i) {
        double* Ci = C + static_cast<size_t>(i) * n;
        for (int kk = 0; kk < k; ++kk) {
            const double a = A[static_cast<size_t>(i) * k + kk];
            const __m256d av = _mm256_set1_pd(a);
            const double* Bk = B + static_cast<size_t>(kk) * n;
            int j = 0;
            for (; j < n4; j += 4) {
                __m256d c = _mm256_loadu_pd(Ci + j);
                c = _mm256_add_pd(c, _mm256_mul_pd(av, _mm256_loadu_pd(Bk + j)));
                _mm256_storeu_pd(Ci + j, c);
            }
            for (; j < n; ++j) Ci[j] += a * Bk[j];
        }
    }
}

void gemm_tn(const double* A, const double* B, double* C, int k, int m, int n) {
    std::memset(C, 0, sizeof(double) * static_cast<size_t>(m) * n);
    const int n4 = n & ~3;
    for (int i = 0; i < m; ++i) {
        double* Ci = C + static_cast<size_t>(i) * n;
        for (int kk = 0; kk < k; ++kk) {
            const double a = A[static_cast<size_t>(kk) * m + i];
            const __m256d av = _mm256_set1_pd(a);
            const double* Bk = B + static_cast<size_t>(kk) * n;
            int j = 0;
            for (; j < n4; j += 4) {
                __m256d c = _mm256_loadu_pd(Ci + j);
                c = _mm256_add_pd(c, _mm256_mul_pd(av, _mm256_loadu_pd(Bk + j)));
                _mm256_storeu_pd(Ci + j, c);
            }
            for (; j < n; ++j) Ci[j] += a * Bk[j];
        }
    }
}

void gemm_nt(const double* A, const double* B, double* C, int m, int k, int n) {
    std::memset(C, 0, sizeof(double) * static_cast<size_t>(m) * n);
    const int n4 = n & ~3;
    for (int i = 0; i < m; ++i) {
        double* Ci = C + static_cast<size_t>(i) * n;
        const double* Ai = A + static_cast<size_t>(i) * k;
        for (int kk = 0; kk < k; ++kk) {
            const double a = Ai[kk];
            const __m256d av = _mm256_set1_pd(a);
            int j = 0;
            // Column kk of B^T is strided in B; gather four lanes by hand.
            for (; j < n4; j += 4) {
                const __m256d bv = _mm256_set_pd(B[static_cast<size_t>(j + 3) * k + kk],
                                                 B[static_cast<size_t>(j + 2) * k + kk],
                                                 B[static_cast<size_t>(j + 1) * k + kk],
                                                 B[static_cast<size_t>(j + 0) * k + kk]);
                __m256d c = _mm256_loadu_pd(Ci + j);
                c = _mm256_add_pd(c, _mm256_mul_pd(av, bv));
                _mm256_storeu_pd(Ci + j, c);
            }
            for (; j < n; ++j) Ci[j] += a * B[static_cast<size_t>(j) * k + kk];
        }
    }
}

void add(const double* a, const double* b, double* c, int len) {
    int i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(c + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < len; ++i) c[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* c, int len) {
    int i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(c + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < len; ++i) c[i] = a[i] - b[i];
}

void scale(const double* a, double s, double* c, int len) {
    const __m256d sv = _mm256_set1_pd(s);
    int i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(c + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), sv));
    for (; i < len; ++i) c[i] = a[i] * s;
}

}  // namespace debiaskf::kernels::avx2

#endif  // DEBIASKF_HAVE_AVX2_BUILD
