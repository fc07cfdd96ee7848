#pragma once

// Dense arithmetic kernels behind the Matrix type.
//
// Two implementations of every kernel: a scalar reference and an AVX2
// variant. The AVX2 code vectorizes across output columns only and uses
// separate multiply/add (no FMA), so every C[i,j] sees exactly the same
// sequence of rounded operations as the scalar loop. Backends are therefore
// bit-identical, which the kernel test suite asserts, and runs stay
// reproducible no matter which backend the dispatcher picks.
//
// Selection: DEBIASKF_SIMD=scalar|avx2|auto (default auto = best the CPU
// supports).

#include <cstdint>

namespace debiaskf::kernels {

enum class Backend : std::uint8_t { scalar = 0, avx2 = 1 };

// Resolved once per process from DEBIASKF_SIMD and CPU features.
Backend active_backend();
const char* backend_name();
// Test hook; throws FilterError if the CPU lacks the requested backend.
void force_backend(Backend b);

// All matrices row-major, C never aliases A or B.
// C(m x n) = A(m x k) * B(k x n)
void gemm_nn(const double* A, const double* B, double* C, int m, int k, int n);
// C(m x n) = A^T * B with A stored (k x m), B (k x n)
void gemm_tn(const double* A, const double* B, double* C, int k, int m, int n);
// C(m x n) = A * B^T with A stored (m x k), B (n x k)
void gemm_nt(const double* A, const double* B, double* C, int m, int k, int n);

void add(const double* a, const double* b, double* c, int len);
void sub(const double* a, const double* b, double* c, int len);
void scale(const double* a, double s, double* c, int len);

namespace scalar {
void gemm_nn(const double* A, const double* B, double* C, int m, int k, int n);
void gemm_tn(const double* A, const double* B, double* C, int k, int m, int n);
void gemm_nt(const double* A, const double* B, double* C, int m, int k, int n);
void add(const double* a, const double* b, double* c, int len);
void sub(const double* a, const double* b, double* c, int len);
void scale(const double* a, double s, double* c, int len);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define DEBIASKF_HAVE_AVX2_BUILD 1
namespace avx2 {
void gemm_nn(const double* A, const double* B, double* C, int m, int k, int n);
void gemm_tn(const double* A, const double* B, double* C, int k, int m, int n);
void gemm_nt(const double* A, const double* B, double* C, int m, int k, int n);
void add(const double* a, const double* b, double* c, int len);
void sub(const double* a, const double* b, double* c, int len);
void scale(const double* a, double s, double* c, int len);
}  // namespace avx2
#else
#define DEBIASKF_HAVE_AVX2_BUILD 0
#endif

}  // namespace debiaskf::kernels
