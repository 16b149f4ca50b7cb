#pragma once

// Recurrent cells whose dense projections are graph convolutions. An
// undefined (default-constructed) state tensor means an all-zero state.

#include <cstddef>
#include <string>

#include "tgnn/nn/layers.hpp"

namespace tgnn {

class GConvGRUCell {
 public:
  GConvGRUCell(ParameterStore& store, const std::string& prefix, std::size_t in_channels,
               std::size_t filters, std::size_t k, Rng& rng);

  // z = sig(Cxz(x) + Chz(h)), r = sig(Cxr(x) + Chr(h)),
  // h~ = tanh(Cxh(x) + Chh(r * h)), h' = z * h + (1 - z) * h~
  Tensor forward(Tape& tape, const Tensor& x, const Tensor& h_prev,
                 const SparseOperator& lhat) const;

  std::size_t filters() const { return filters_; }

 private:
  std::size_t filters_;
  ChebConv x_z_, h_z_, x_r_, h_r_, x_h_, h_h_;
};

struct LstmState {
  Tensor h;
  Tensor c;
};

class GConvLSTMCell {
 public:
  GConvLSTMCell(ParameterStore& store, const std::string& prefix, std::size_t in_channels,
                std::size_t filters, std::size_t k, Rng& rng);

  // i = sig(Cxi(x) + Chi(h) + w_ci * c + b_i)
  // f = sig(Cxf(x) + Chf(h) + w_cf * c + b_f)
  // g = tanh(Cxc(x) + Chc(h) + b_c)
  // c' = f * c + i * g
  // o = sig(Cxo(x) + Cho(h) + w_co * c' + b_o)
  // h' = o * tanh(c')
  LstmState forward(Tape& tape, const Tensor& x, const LstmState& prev,
                    const SparseOperator& lhat) const;

  std::size_t filters() const { return filters_; }

 private:
  std::size_t filters_;
  ChebConv x_i_, h_i_, x_f_, h_f_, x_c_, h_c_, x_o_, h_o_;
  Parameter* w_c_i_;
  Parameter* w_c_f_;
  Parameter* w_c_o_;
  Parameter* b_i_;
  Parameter* b_f_;
  Parameter* b_c_;
  Parameter* b_o_;
};

class DCRNNCell {
 public:
  // k is the diffusion order.
  DCRNNCell(ParameterStore& store, const std::string& prefix, std::size_t in_channels,
            std::size_t filters, std::size_t k, Rng& rng);

  // GRU recurrence with one diffusion convolution per gate over [x | h]:
  // z = sig(Dz([x | h])), r = sig(Dr([x | h])), h~ = tanh(Dh([x | r * h])),
  // h' = z * h + (1 - z) * h~
  Tensor forward(Tape& tape, const Tensor& x, const Tensor& h_prev, const SparseOperator& rw_out,
                 const SparseOperator& rw_in) const;

  std::size_t filters() const { return filters_; }

 private:
  std::size_t filters_;
  DiffusionConv z_, r_, h_;
};

}  // namespace tgnn
