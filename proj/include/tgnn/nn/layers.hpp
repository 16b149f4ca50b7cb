#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tgnn/autodiff/tensor.hpp"
#include "tgnn/graph/sparse.hpp"
#include "tgnn/nn/parameters.hpp"

namespace tgnn {

// sum_{k<K} T_k(L) X Theta_k + b, with T_0 = X, T_1 = L X and
// T_k = 2 L T_{k-1} - T_{k-2}. K = weights.size().
Tensor cheb_conv(const Tensor& x, const SparseOperator& lhat, std::span<const Tensor> weights,
                 const Tensor& bias);

// sum_{k=0..K} P_out^k X theta_out_k + P_in^k X theta_in_k + b, K = weights_out.size() - 1.
Tensor diffusion_conv(const Tensor& x, const SparseOperator& rw_out, const SparseOperator& rw_in,
                      std::span<const Tensor> weights_out, std::span<const Tensor> weights_in,
                      const Tensor& bias);

// X W + b
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);

class ChebConv {
 public:
  // Parameters "<prefix>.weight.<k>" [in x out] and "<prefix>.bias" [1 x out].
  ChebConv(ParameterStore& store, const std::string& prefix, std::size_t in_channels,
           std::size_t out_channels, std::size_t k, Rng& rng);

  Tensor forward(Tape& tape, const Tensor& x, const SparseOperator& lhat) const;

  std::size_t in_channels() const { return in_; }
  std::size_t out_channels() const { return out_; }
  std::size_t k() const { return weights_.size(); }

 private:
  std::size_t in_;
  std::size_t out_;
  std::vector<Parameter*> weights_;
  Parameter* bias_;
};

class DiffusionConv {
 public:
  // Parameters "<prefix>.out.<k>", "<prefix>.in.<k>" for k = 0..K and "<prefix>.bias".
  DiffusionConv(ParameterStore& store, const std::string& prefix, std::size_t in_channels,
                std::size_t out_channels, std::size_t k, Rng& rng);

  Tensor forward(Tape& tape, const Tensor& x, const SparseOperator& rw_out,
                 const SparseOperator& rw_in) const;

  std::size_t in_channels() const { return in_; }
  std::size_t out_channels() const { return out_; }
  std::size_t k() const { return weights_out_.size() - 1; }

 private:
  std::size_t in_;
  std::size_t out_;
  std::vector<Parameter*> weights_out_;
  std::vector<Parameter*> weights_in_;
  Parameter* bias_;
};

class Linear {
 public:
  Linear(ParameterStore& store, const std::string& prefix, std::size_t in_channels,
         std::size_t out_channels, Rng& rng);

  Tensor forward(Tape& tape, const Tensor& x) const;

 private:
  Parameter* weight_;
  Parameter* bias_;
};

}  // namespace tgnn
