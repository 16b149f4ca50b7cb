#include "tgnn/nn/recurrent.hpp"

#include "tgnn/autodiff/ops.hpp"
#include "tgnn/errors.hpp"

namespace tgnn {

namespace {

Tensor state_or_zeros(const Tensor& state, std::size_t rows, std::size_t filters,
                      const char* what) {
  if (!state.defined()) return Tensor(Matrix(rows, filters));
  if (state.rows() != rows || state.cols() != filters) {
    throw ShapeError(std::string(what) + " state is " + to_string(state.shape()) + ", expected " +
                     to_string(Shape{rows, filters}));
  }
  return state;
}

// z * h + (1 - z) * candidate
Tensor gru_blend(const Tensor& z, const Tensor& h, const Tensor& candidate) {
  return add(hadamard(z, h), hadamard(one_minus(z), candidate));
}

}  // namespace

GConvGRUCell::GConvGRUCell(ParameterStore& store, const std::string& prefix,
                           std::size_t in_channels, std::size_t filters, std::size_t k, Rng& rng)
    : filters_(filters),
      x_z_(store, prefix + ".x_z", in_channels, filters, k, rng),
      h_z_(store, prefix + ".h_z", filters, filters, k, rng),
      x_r_(store, prefix + ".x_r", in_channels, filters, k, rng),
      h_r_(store, prefix + ".h_r", filters, filters, k, rng),
      x_h_(store, prefix + ".x_h", in_channels, filters, k, rng),
      h_h_(store, prefix + ".h_h", filters, filters, k, rng) {}

Tensor GConvGRUCell::forward(Tape& tape, const Tensor& x, const Tensor& h_prev,
                             const SparseOperator& lhat) const {
  const Tensor h = state_or_zeros(h_prev, x.rows(), filters_, "hidden");
  const Tensor z = sigmoid(add(x_z_.forward(tape, x, lhat), h_z_.forward(tape, h, lhat)));
  const Tensor r = sigmoid(add(x_r_.forward(tape, x, lhat), h_r_.forward(tape, h, lhat)));
  const Tensor candidate =
      tanh(add(x_h_.forward(tape, x, lhat), h_h_.forward(tape, hadamard(r, h), lhat)));
  return gru_blend(z, h, candidate);
}

GConvLSTMCell::GConvLSTMCell(ParameterStore& store, const std::string& prefix,
                             std::size_t in_channels, std::size_t filters, std::size_t k, Rng& rng)
    : filters_(filters),
      x_i_(store, prefix + ".x_i", in_channels, filters, k, rng),
      h_i_(store, prefix + ".h_i", filters, filters, k, rng),
      x_f_(store, prefix + ".x_f", in_channels, filters, k, rng),
      h_f_(store, prefix + ".h_f", filters, filters, k, rng),
      x_c_(store, prefix + ".x_c", in_channels, filters, k, rng),
      h_c_(store, prefix + ".h_c", filters, filters, k, rng),
      x_o_(store, prefix + ".x_o", in_channels, filters, k, rng),
      h_o_(store, prefix + ".h_o", filters, filters, k, rng),
      w_c_i_(&store.add(prefix + ".w_c_i", glorot_uniform(1, filters, rng))),
      w_c_f_(&store.add(prefix + ".w_c_f", glorot_uniform(1, filters, rng))),
      w_c_o_(&store.add(prefix + ".w_c_o", glorot_uniform(1, filters, rng))),
      b_i_(&store.add(prefix + ".b_i", Matrix(1, filters))),
      b_f_(&store.add(prefix + ".b_f", Matrix(1, filters))),
      b_c_(&store.add(prefix + ".b_c", Matrix(1, filters))),
      b_o_(&store.add(prefix + ".b_o", Matrix(1, filters))) {}

LstmState GConvLSTMCell::forward(Tape& tape, const Tensor& x, const LstmState& prev,
                                 const SparseOperator& lhat) const {
  const Tensor h = state_or_zeros(prev.h, x.rows(), filters_, "hidden");
  const Tensor c = state_or_zeros(prev.c, x.rows(), filters_, "cell");

  auto gate_input = [&](const ChebConv& cx, const ChebConv& ch, Parameter* bias) {
    return add_bias(add(cx.forward(tape, x, lhat), ch.forward(tape, h, lhat)), tape.watch(*bias));
  };

  const Tensor i = sigmoid(add(gate_input(x_i_, h_i_, b_i_), mul_row(c, tape.watch(*w_c_i_))));
  const Tensor f = sigmoid(add(gate_input(x_f_, h_f_, b_f_), mul_row(c, tape.watch(*w_c_f_))));
  const Tensor g = tanh(gate_input(x_c_, h_c_, b_c_));
  const Tensor c_next = add(hadamard(f, c), hadamard(i, g));
  const Tensor o =
      sigmoid(add(gate_input(x_o_, h_o_, b_o_), mul_row(c_next, tape.watch(*w_c_o_))));
  return {hadamard(o, tanh(c_next)), c_next};
}

DCRNNCell::DCRNNCell(ParameterStore& store, const std::string& prefix, std::size_t in_channels,
                     std::size_t filters, std::size_t k, Rng& rng)
    : filters_(filters),
      z_(store, prefix + ".z", in_channels + filters, filters, k, rng),
      r_(store, prefix + ".r", in_channels + filters, filters, k, rng),
      h_(store, prefix + ".h", in_channels + filters, filters, k, rng) {}

Tensor DCRNNCell::forward(Tape& tape, const Tensor& x, const Tensor& h_prev,
                          const SparseOperator& rw_out, const SparseOperator& rw_in) const {
  const Tensor h = state_or_zeros(h_prev, x.rows(), filters_, "hidden");
  const Tensor xh = concat_cols(x, h);
  const Tensor z = sigmoid(z_.forward(tape, xh, rw_out, rw_in));
  const Tensor r = sigmoid(r_.forward(tape, xh, rw_out, rw_in));
  const Tensor candidate = tanh(h_.forward(tape, concat_cols(x, hadamard(r, h)), rw_out, rw_in));
  return gru_blend(z, h, candidate);
}

}  // namespace tgnn
