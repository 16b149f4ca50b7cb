#pragma once

// Loop nests shared by every ISA variant. Each variant supplies an Ops policy
// with row-level primitives (axpy, dot) and instantiates these templates in its
// own translation unit, so the compiled bodies never mix instruction sets.

#include <cstddef>
#include <cstdint>

namespace tgnn::kernels::detail {

template <class Ops>
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    if (!accumulate) {
      for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
    }
    const double* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double s = arow[p];
      if (s != 0.0) Ops::axpy(n, s, b + p * n, crow);
    }
  }
}

template <class Ops>
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c) {
  // C[i, :] += sum_p A[p, i] * B[p, :]
  for (std::size_t p = 0; p < k; ++p) {
    const double* arow = a + p * m;
    const double* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double s = arow[i];
      if (s != 0.0) Ops::axpy(n, s, brow, c + i * n);
    }
  }
}

template <class Ops>
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] += Ops::dot(k, arow, b + j * k);
  }
}

template <class Ops>
void csr_spmm(std::size_t rows, std::size_t d, const std::uint32_t* row_ptr,
              const std::uint32_t* col_idx, const double* values, const double* x, double* y,
              bool accumulate) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* yrow = y + r * d;
    if (!accumulate) {
      for (std::size_t j = 0; j < d; ++j) yrow[j] = 0.0;
    }
    for (std::uint32_t e = row_ptr[r]; e < row_ptr[r + 1]; ++e) {
      Ops::axpy(d, values[e], x + static_cast<std::size_t>(col_idx[e]) * d, yrow);
    }
  }
}

}  // namespace tgnn::kernels::detail
