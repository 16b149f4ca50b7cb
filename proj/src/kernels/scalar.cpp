#include "tgnn/kernels/kernels.hpp"

#include <cmath>

#include "loops.hpp"

namespace tgnn::kernels {
namespace {

struct ScalarOps {
  static void axpy(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
  }
  static double dot(std::size_t n, const double* x, const double* y) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
  }
};

double sum(std::size_t n, const double* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double squared_distance(std::size_t n, const double* a, const double* b) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void add(std::size_t n, const double* a, const double* b, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(std::size_t n, const double* a, const double* b, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(std::size_t n, const double* a, const double* b, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(std::size_t n, double s, const double* a, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = s * a[i];
}

void add_scalar(std::size_t n, double s, const double* a, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + s;
}

void accumulate(std::size_t n, const double* a, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a[i];
}

void mul_accumulate(std::size_t n, const double* a, const double* b, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a[i] * b[i];
}

void relu(std::size_t n, const double* x, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(std::size_t n, const double* x, const double* g, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > 0.0) out[i] += g[i];
  }
}

void adam_update(std::size_t n, double* theta, const double* grad, double* m, double* v, double lr,
                 double beta1, double beta2, double eps, double bc1, double bc2) {
  const double one_minus_b1 = 1.0 - beta1;
  const double one_minus_b2 = 1.0 - beta2;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    m[i] = beta1 * m[i] + one_minus_b1 * g;
    v[i] = beta2 * v[i] + one_minus_b2 * (g * g);
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    theta[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      Isa::scalar,
      "scalar",
      &ScalarOps::axpy,
      &ScalarOps::dot,
      &sum,
      &squared_distance,
      &add,
      &sub,
      &mul,
      &scale,
      &add_scalar,
      &accumulate,
      &mul_accumulate,
      &relu,
      &relu_backward,
      &detail::gemm_nn<ScalarOps>,
      &detail::gemm_tn<ScalarOps>,
      &detail::gemm_nt<ScalarOps>,
      &detail::csr_spmm<ScalarOps>,
      &adam_update,
  };
  return table;
}

}  // namespace tgnn::kernels
