#include "tgnn/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>

#include "tgnn/errors.hpp"
#include "tgnn/kernels/kernels.hpp"

namespace tgnn {
namespace {

const kernels::KernelTable& K() { return kernels::active(); }

Tensor emit(Matrix value, std::initializer_list<Tensor> inputs, BackwardFn backward) {
  Tape* tape = nullptr;
  for (const Tensor& in : inputs) {
    if (!in.tracked()) continue;
    if (tape != nullptr && tape != in.tape()) {
      throw Error("operands are tracked on different tapes");
    }
    tape = in.tape();
  }
  if (tape == nullptr) return Tensor(std::move(value));
  return tape->record(std::move(value), inputs, std::move(backward));
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + to_string(a.shape()) + " vs " +
                     to_string(b.shape()));
  }
}

void require_row_vector(const char* op, const Tensor& x, const Tensor& row) {
  if (row.rows() != 1 || row.cols() != x.cols()) {
    throw ShapeError(std::string(op) + ": expected [1x" + std::to_string(x.cols()) + "], got " +
                     to_string(row.shape()));
  }
}

// Column sums of g accumulated into out[1 x cols].
void accumulate_column_sums(const Matrix& g, Matrix& out) {
  for (std::size_t r = 0; r < g.rows(); ++r) K().accumulate(g.cols(), g.data() + r * g.cols(), out.data());
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ, " + to_string(a.shape()) + " x " +
                     to_string(b.shape()));
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix out(m, n);
  K().gemm_nn(m, n, k, a.value().data(), b.value().data(), out.data(), false);
  auto av = a.shared_value();
  auto bv = b.shared_value();
  return emit(std::move(out), {a, b},
              [av, bv, m, k, n](const Matrix& g, std::span<Matrix* const> grads) {
                if (grads[0]) K().gemm_nt(m, k, n, g.data(), bv->data(), grads[0]->data());
                if (grads[1]) K().gemm_tn(k, n, m, av->data(), g.data(), grads[1]->data());
              });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape("add", a, b);
  Matrix out(a.shape());
  K().add(out.size(), a.value().data(), b.value().data(), out.data());
  return emit(std::move(out), {a, b}, [](const Matrix& g, std::span<Matrix* const> grads) {
    for (Matrix* slot : grads) {
      if (slot) K().accumulate(g.size(), g.data(), slot->data());
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape("sub", a, b);
  Matrix out(a.shape());
  K().sub(out.size(), a.value().data(), b.value().data(), out.data());
  return emit(std::move(out), {a, b}, [](const Matrix& g, std::span<Matrix* const> grads) {
    if (grads[0]) K().accumulate(g.size(), g.data(), grads[0]->data());
    if (grads[1]) K().sub(g.size(), grads[1]->data(), g.data(), grads[1]->data());
  });
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
  require_same_shape("hadamard", a, b);
  Matrix out(a.shape());
  K().mul(out.size(), a.value().data(), b.value().data(), out.data());
  auto av = a.shared_value();
  auto bv = b.shared_value();
  return emit(std::move(out), {a, b}, [av, bv](const Matrix& g, std::span<Matrix* const> grads) {
    if (grads[0]) K().mul_accumulate(g.size(), g.data(), bv->data(), grads[0]->data());
    if (grads[1]) K().mul_accumulate(g.size(), g.data(), av->data(), grads[1]->data());
  });
}

Tensor scale(const Tensor& a, double s) {
  Matrix out(a.shape());
  K().scale(out.size(), s, a.value().data(), out.data());
  return emit(std::move(out), {a}, [s](const Matrix& g, std::span<Matrix* const> grads) {
    K().axpy(g.size(), s, g.data(), grads[0]->data());
  });
}

Tensor add_scalar(const Tensor& a, double s) {
  if (s == 0.0) return a;
  Matrix out(a.shape());
  K().add_scalar(out.size(), s, a.value().data(), out.data());
  return emit(std::move(out), {a}, [](const Matrix& g, std::span<Matrix* const> grads) {
    K().accumulate(g.size(), g.data(), grads[0]->data());
  });
}

Tensor one_minus(const Tensor& a) {
  Matrix out(a.shape());
  const double* x = a.value().data();
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = 1.0 - x[i];
  return emit(std::move(out), {a}, [](const Matrix& g, std::span<Matrix* const> grads) {
    K().sub(g.size(), grads[0]->data(), g.data(), grads[0]->data());
  });
}

Tensor add_bias(const Tensor& x, const Tensor& bias) {
  require_row_vector("add_bias", x, bias);
  Matrix out(x.shape());
  const std::size_t n = x.cols();
  for (std::size_t r = 0; r < x.rows(); ++r) {
    K().add(n, x.value().data() + r * n, bias.value().data(), out.data() + r * n);
  }
  return emit(std::move(out), {x, bias}, [](const Matrix& g, std::span<Matrix* const> grads) {
    if (grads[0]) K().accumulate(g.size(), g.data(), grads[0]->data());
    if (grads[1]) accumulate_column_sums(g, *grads[1]);
  });
}

Tensor mul_row(const Tensor& x, const Tensor& w) {
  require_row_vector("mul_row", x, w);
  Matrix out(x.shape());
  const std::size_t n = x.cols();
  for (std::size_t r = 0; r < x.rows(); ++r) {
    K().mul(n, x.value().data() + r * n, w.value().data(), out.data() + r * n);
  }
  auto xv = x.shared_value();
  auto wv = w.shared_value();
  return emit(std::move(out), {x, w}, [xv, wv, n](const Matrix& g, std::span<Matrix* const> grads) {
    for (std::size_t r = 0; r < g.rows(); ++r) {
      const double* grow = g.data() + r * n;
      if (grads[0]) K().mul_accumulate(n, grow, wv->data(), grads[0]->data() + r * n);
      if (grads[1]) K().mul_accumulate(n, grow, xv->data() + r * n, grads[1]->data());
    }
  });
}

Tensor relu(const Tensor& x) {
  Matrix out(x.shape());
  K().relu(out.size(), x.value().data(), out.data());
  auto xv = x.shared_value();
  return emit(std::move(out), {x}, [xv](const Matrix& g, std::span<Matrix* const> grads) {
    K().relu_backward(g.size(), xv->data(), g.data(), grads[0]->data());
  });
}

Tensor sigmoid(const Tensor& x) {
  auto out = std::make_shared<Matrix>(x.shape());
  const double* in = x.value().data();
  for (std::size_t i = 0; i < out->size(); ++i) out->data()[i] = stable_sigmoid(in[i]);
  Matrix value = *out;
  std::shared_ptr<const Matrix> saved = std::move(out);
  return emit(std::move(value), {x}, [saved](const Matrix& g, std::span<Matrix* const> grads) {
    const double* s = saved->data();
    double* dst = grads[0]->data();
    for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g.data()[i] * s[i] * (1.0 - s[i]);
  });
}

Tensor tanh(const Tensor& x) {
  auto out = std::make_shared<Matrix>(x.shape());
  const double* in = x.value().data();
  for (std::size_t i = 0; i < out->size(); ++i) out->data()[i] = std::tanh(in[i]);
  Matrix value = *out;
  std::shared_ptr<const Matrix> saved = std::move(out);
  return emit(std::move(value), {x}, [saved](const Matrix& g, std::span<Matrix* const> grads) {
    const double* y = saved->data();
    double* dst = grads[0]->data();
    for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g.data()[i] * (1.0 - y[i] * y[i]);
  });
}

Tensor activation(Activation kind, const Tensor& x) {
  switch (kind) {
    case Activation::relu:
      return relu(x);
    case Activation::sigmoid:
      return sigmoid(x);
    case Activation::tanh:
      return tanh(x);
  }
  throw ConfigError("unknown activation");
}

Tensor dropout(const Tensor& x, double rate, bool training, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must be in [0, 1), got " + std::to_string(rate));
  }
  if (!training || rate == 0.0) return x;
  auto mask = std::make_shared<Matrix>(x.shape());
  std::bernoulli_distribution keep(1.0 - rate);
  const double survivor = 1.0 / (1.0 - rate);
  for (double& m : mask->values()) m = keep(rng) ? survivor : 0.0;
  Matrix out(x.shape());
  K().mul(out.size(), x.value().data(), mask->data(), out.data());
  std::shared_ptr<const Matrix> saved = std::move(mask);
  return emit(std::move(out), {x}, [saved](const Matrix& g, std::span<Matrix* const> grads) {
    K().mul_accumulate(g.size(), g.data(), saved->data(), grads[0]->data());
  });
}

Tensor mse_loss(const Tensor& prediction, const Tensor& target) {
  if (prediction.value().size() != target.value().size()) {
    throw ShapeError("mse_loss: " + to_string(prediction.shape()) + " vs " +
                     to_string(target.shape()));
  }
  const std::size_t n = prediction.value().size();
  const double total = K().squared_distance(n, prediction.value().data(), target.value().data());
  auto pv = prediction.shared_value();
  auto tv = target.shared_value();
  return emit(Matrix(1, 1, total / static_cast<double>(n)), {prediction, target},
              [pv, tv, n](const Matrix& g, std::span<Matrix* const> grads) {
                const double c = 2.0 * g(0, 0) / static_cast<double>(n);
                for (std::size_t i = 0; i < n; ++i) {
                  const double d = c * (pv->data()[i] - tv->data()[i]);
                  if (grads[0]) grads[0]->data()[i] += d;
                  if (grads[1]) grads[1]->data()[i] -= d;
                }
              });
}

Tensor masked_mse_loss(const Tensor& prediction, const Tensor& target,
                       const std::vector<bool>& row_mask) {
  require_same_shape("masked_mse_loss", prediction, target);
  if (row_mask.size() != prediction.rows()) {
    throw ShapeError("masked_mse_loss: mask has " + std::to_string(row_mask.size()) +
                     " entries for " + std::to_string(prediction.rows()) + " rows");
  }
  const std::size_t cols = prediction.cols();
  std::vector<bool> mask = row_mask;
  std::size_t selected = 0;
  double total = 0.0;
  for (std::size_t r = 0; r < mask.size(); ++r) {
    if (!mask[r]) continue;
    ++selected;
    total += K().squared_distance(cols, prediction.value().data() + r * cols,
                                  target.value().data() + r * cols);
  }
  if (selected == 0) throw DataError("masked_mse_loss: mask selects no rows");
  const double count = static_cast<double>(selected * cols);
  auto pv = prediction.shared_value();
  auto tv = target.shared_value();
  return emit(Matrix(1, 1, total / count), {prediction, target},
              [pv, tv, mask = std::move(mask), cols, count](const Matrix& g,
                                                            std::span<Matrix* const> grads) {
                const double c = 2.0 * g(0, 0) / count;
                for (std::size_t r = 0; r < mask.size(); ++r) {
                  if (!mask[r]) continue;
                  for (std::size_t j = r * cols; j < (r + 1) * cols; ++j) {
                    const double d = c * (pv->data()[j] - tv->data()[j]);
                    if (grads[0]) grads[0]->data()[j] += d;
                    if (grads[1]) grads[1]->data()[j] -= d;
                  }
                }
              });
}

Tensor sum(const Tensor& x) {
  const double total = K().sum(x.value().size(), x.value().data());
  return emit(Matrix(1, 1, total), {x}, [](const Matrix& g, std::span<Matrix* const> grads) {
    K().add_scalar(grads[0]->size(), g(0, 0), grads[0]->data(), grads[0]->data());
  });
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("concat_cols: row counts differ, " + to_string(a.shape()) + " vs " +
                     to_string(b.shape()));
  }
  const std::size_t rows = a.rows(), ca = a.cols(), cb = b.cols();
  Matrix out(rows, ca + cb);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(a.value().data() + r * ca, ca, out.data() + r * (ca + cb));
    std::copy_n(b.value().data() + r * cb, cb, out.data() + r * (ca + cb) + ca);
  }
  return emit(std::move(out), {a, b},
              [rows, ca, cb](const Matrix& g, std::span<Matrix* const> grads) {
                for (std::size_t r = 0; r < rows; ++r) {
                  const double* grow = g.data() + r * (ca + cb);
                  if (grads[0]) K().accumulate(ca, grow, grads[0]->data() + r * ca);
                  if (grads[1]) K().accumulate(cb, grow + ca, grads[1]->data() + r * cb);
                }
              });
}

Tensor detach(const Tensor& x) { return Tensor::constant(x.shared_value()); }

}  // namespace tgnn
