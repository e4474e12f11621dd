// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

// Thin row-major wrappers over cblas_{s,d}gemm. Internal to the kernels.

#ifndef VSR_SRC_GEMM_HPP
#define VSR_SRC_GEMM_HPP

#include <cstdint>

namespace vsr::detail {

// C (M x N) = alpha * op(A) * op(B) + beta * C, all row-major.
// trans_a/b select op(X) = X^T; lda/ldb are the leading dimensions of the
// stored matrices.
void gemm(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k, float alpha,
          const float* a, int64_t lda, const float* b, int64_t ldb, float beta, float* c,
          int64_t ldc);
void gemm(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k, double alpha,
          const double* a, int64_t lda, const double* b, int64_t ldb, double beta, double* c,
          int64_t ldc);

// Pins the BLAS backend to one thread; vsr manages its own parallelism.
void init_blas_single_thread();

}  // namespace vsr::detail

#endif  // VSR_SRC_GEMM_HPP
