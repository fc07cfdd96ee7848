// Scalar reference kernels. The loop orders here define the canonical
// rounding sequence; the SIMD variants must replicate it exactly.

#include "debiaskf/kernels.hpp"

#include <cstring>

namespace debiaskf::kernels::scalar {

// ikj order: C[i,:] accumulates a := A[i,k] against row k of B. The inner
// j loop is the data-parallel axis.
void gemm_nn(const double* A, const double* B, double* C, int m, int k, int n) {
    std::memset(C, 0, sizeof(double) * static_cast<size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
        double* Ci = C + static_cast<size_t>(i) * n;
        for (int kk = 0; kk < k; ++kk) {
            const double a = A[static_cast<size_t>(i) * k + kk];
            const double* Bk = B + static_cast<size_t>(kk) * n;
            for (int j = 0; j < n; ++j) Ci[j] += a * Bk[j];
        }
    }
}

void gemm_tn(const double* A, const double* B, double* C, int k, int m, int n) {
    std::memset(C, 0, sizeof(double) * static_cast<size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
        double* Ci = C + static_cast<size_t>(i) * n;
        for (int kk = 0; kk < k; ++kk) {
            const double a = A[static_cast<size_t>(kk) * m + i];
            const double* Bk = B + static_cast<size_t>(kk) * n;
            for (int j = 0; j < n; ++j) Ci[j] += a * Bk[j];
        }
    }
}

void gemm_nt(const double* A, const double* B, double* C, int m, int k, int n) {
    std::memset(C, 0, sizeof(double) * static_cast<size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
        double* Ci = C + static_cast<size_t>(i) * n;
        const double* Ai = A + static_cast<size_t>(i) * k;
        for (int kk = 0; kk < k; ++kk) {
            const double a = Ai[kk];
            // B^T column kk is the kk-th element of each row of B.
            for (int j = 0; j < n; ++j) Ci[j] += a * B[static_cast<size_t>(j) * k + kk];
        }
    }
}

void add(const double* a, const double* b, double* c, int len) {
    for (int i = 0; i < len; ++i) c[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* c, int len) {
    for (int i = 0; i < len; ++i) c[i] = a[i] - b[i];
}

void scale(const double* a, double s, double* c, int len) {
    for (int i = 0; i < len; ++i) c[i] = a[i] * s;
}

}  // namespace debiaskf::kernels::scalar
