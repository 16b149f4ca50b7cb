#pragma once

#include <span>
#include <vector>

#include "tgnn/autodiff/tensor.hpp"
#include "tgnn/random.hpp"

namespace tgnn {

// All binary ops take their tape from whichever operand is tracked; operands
// tracked on two different tapes are rejected.

Tensor matmul(const Tensor& a, const Tensor& b);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
Tensor add_scalar(const Tensor& a, double s);
// 1 - a
Tensor one_minus(const Tensor& a);

// x[m x n] + b[1 x n] on every row.
Tensor add_bias(const Tensor& x, const Tensor& bias);
// x[m x n] * w[1 x n] on every row.
Tensor mul_row(const Tensor& x, const Tensor& w);

enum class Activation { relu, sigmoid, tanh };

Tensor activation(Activation kind, const Tensor& x);
Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);

// Inverted dropout: survivors are scaled by 1/(1-rate) so evaluation is the identity.
Tensor dropout(const Tensor& x, double rate, bool training, Rng& rng);

Tensor mse_loss(const Tensor& prediction, const Tensor& target);
// Mean squared error over rows whose mask entry is set. An all-false mask is an error.
Tensor masked_mse_loss(const Tensor& prediction, const Tensor& target,
                       const std::vector<bool>& row_mask);

// Sum of all entries as a 1x1 tensor.
Tensor sum(const Tensor& x);

// [a | b] along columns.
Tensor concat_cols(const Tensor& a, const Tensor& b);

// Same value, no tape history.
Tensor detach(const Tensor& x);

}  // namespace tgnn
