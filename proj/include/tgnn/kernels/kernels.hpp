#pragma once

// Dense and sparse inner loops behind every tensor operation.
//
// Each instruction-set variant fills one KernelTable. The scalar table is the
// reference; wider variants must agree with it bitwise for the elementwise
// kernels and to within rounding for the reductions and products (those use
// FMA and a different summation order). The active table is chosen once at
// startup from CPUID, overridable with TGNN_KERNELS=scalar|avx2.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace tgnn::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;

  // y += a * x
  void (*axpy)(std::size_t n, double a, const double* x, double* y);
  double (*dot)(std::size_t n, const double* x, const double* y);
  double (*sum)(std::size_t n, const double* x);
  // sum_i (a_i - b_i)^2
  double (*squared_distance)(std::size_t n, const double* a, const double* b);

  void (*add)(std::size_t n, const double* a, const double* b, double* out);
  void (*sub)(std::size_t n, const double* a, const double* b, double* out);
  void (*mul)(std::size_t n, const double* a, const double* b, double* out);
  void (*scale)(std::size_t n, double s, const double* a, double* out);
  void (*add_scalar)(std::size_t n, double s, const double* a, double* out);
  // out += a
  void (*accumulate)(std::size_t n, const double* a, double* out);
  // out += a * b
  void (*mul_accumulate)(std::size_t n, const double* a, const double* b, double* out);
  void (*relu)(std::size_t n, const double* x, double* out);
  // out += g where x > 0
  void (*relu_backward)(std::size_t n, const double* x, const double* g, double* out);

  // Row-major products. gemm_nn overwrites C unless accumulate is set;
  // gemm_tn and gemm_nt always accumulate.
  // C[m x n] (+)= A[m x k] * B[k x n]
  void (*gemm_nn)(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
                  double* c, bool accumulate);
  // C[m x n] += A^T * B, with A stored [k x m] and B stored [k x n]
  void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
                  double* c);
  // C[m x n] += A * B^T, with A stored [m x k] and B stored [n x k]
  void (*gemm_nt)(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
                  double* c);

  // Y[rows x d] (+)= S * X for S in CSR form.
  void (*csr_spmm)(std::size_t rows, std::size_t d, const std::uint32_t* row_ptr,
                   const std::uint32_t* col_idx, const double* values, const double* x, double* y,
                   bool accumulate);

  // Bias-corrected Adam update over a flat parameter buffer. bc1 = 1 - beta1^t, bc2 = 1 - beta2^t.
  void (*adam_update)(std::size_t n, double* theta, const double* grad, double* m, double* v,
                      double lr, double beta1, double beta2, double eps, double bc1, double bc2);
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_supports(Isa isa);

// Table used by the tensor library.
const KernelTable& active();

// Switch the active table. Throws std::invalid_argument if the variant is not
// compiled in or the CPU lacks it. Not thread-safe; call before any work starts.
void select(Isa isa);

// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available();

std::string_view to_string(Isa isa);

}  // namespace tgnn::kernels
