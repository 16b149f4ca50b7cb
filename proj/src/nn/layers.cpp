#include "tgnn/nn/layers.hpp"

#include "tgnn/autodiff/ops.hpp"
#include "tgnn/errors.hpp"

namespace tgnn {

namespace {

void check_operator(const SparseOperator& op, const Tensor& x, const char* what) {
  if (op.num_nodes() != x.rows()) {
    throw ShapeError(std::string(what) + " operator is over " + std::to_string(op.num_nodes()) +
                     " nodes but features have " + std::to_string(x.rows()) + " rows");
  }
}

Tensor accumulate(const Tensor& total, const Tensor& term) {
  return total.defined() ? add(total, term) : term;
}

}  // namespace

Tensor cheb_conv(const Tensor& x, const SparseOperator& lhat, std::span<const Tensor> weights,
                 const Tensor& bias) {
  if (weights.empty()) throw ConfigError("cheb_conv needs K >= 1 weight matrices");
  check_operator(lhat, x, "Chebyshev");

  Tensor out = matmul(x, weights[0]);
  if (weights.size() > 1) {
    Tensor prev = x;
    Tensor cur = spmm(lhat, x);
    out = add(out, matmul(cur, weights[1]));
    for (std::size_t k = 2; k < weights.size(); ++k) {
      Tensor next = sub(scale(spmm(lhat, cur), 2.0), prev);
      out = add(out, matmul(next, weights[k]));
      prev = std::move(cur);
      cur = std::move(next);
    }
  }
  return add_bias(out, bias);
}

Tensor diffusion_conv(const Tensor& x, const SparseOperator& rw_out, const SparseOperator& rw_in,
                      std::span<const Tensor> weights_out, std::span<const Tensor> weights_in,
                      const Tensor& bias) {
  if (weights_out.empty() || weights_out.size() != weights_in.size()) {
    throw ConfigError("diffusion_conv needs K + 1 weight matrices per direction");
  }
  check_operator(rw_out, x, "forward random-walk");
  check_operator(rw_in, x, "backward random-walk");

  Tensor out;
  Tensor fwd = x;
  Tensor bwd = x;
  for (std::size_t k = 0; k < weights_out.size(); ++k) {
    if (k > 0) {
      fwd = spmm(rw_out, fwd);
      bwd = spmm(rw_in, bwd);
    }
    out = accumulate(out, matmul(fwd, weights_out[k]));
    out = add(out, matmul(bwd, weights_in[k]));
  }
  return add_bias(out, bias);
}

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  return add_bias(matmul(x, weight), bias);
}

namespace {

std::vector<Tensor> watch_all(Tape& tape, const std::vector<Parameter*>& params) {
  std::vector<Tensor> out;
  out.reserve(params.size());
  for (Parameter* p : params) out.push_back(tape.watch(*p));
  return out;
}

}  // namespace

ChebConv::ChebConv(ParameterStore& store, const std::string& prefix, std::size_t in_channels,
                   std::size_t out_channels, std::size_t k, Rng& rng)
    : in_(in_channels), out_(out_channels) {
  if (k < 1) throw ConfigError("ChebConv needs K >= 1");
  for (std::size_t i = 0; i < k; ++i) {
    weights_.push_back(&store.add(prefix + ".weight." + std::to_string(i),
                                  glorot_uniform(in_channels, out_channels, rng)));
  }
  bias_ = &store.add(prefix + ".bias", Matrix(1, out_channels));
}

Tensor ChebConv::forward(Tape& tape, const Tensor& x, const SparseOperator& lhat) const {
  if (x.cols() != in_) {
    throw ShapeError("ChebConv expects " + std::to_string(in_) + " input channels, got " +
                     std::to_string(x.cols()));
  }
  const std::vector<Tensor> w = watch_all(tape, weights_);
  return cheb_conv(x, lhat, w, tape.watch(*bias_));
}

DiffusionConv::DiffusionConv(ParameterStore& store, const std::string& prefix,
                             std::size_t in_channels, std::size_t out_channels, std::size_t k,
                             Rng& rng)
    : in_(in_channels), out_(out_channels) {
  for (std::size_t i = 0; i <= k; ++i) {
    weights_out_.push_back(&store.add(prefix + ".out." + std::to_string(i),
                                      glorot_uniform(in_channels, out_channels, rng)));
    weights_in_.push_back(&store.add(prefix + ".in." + std::to_string(i),
                                     glorot_uniform(in_channels, out_channels, rng)));
  }
  bias_ = &store.add(prefix + ".bias", Matrix(1, out_channels));
}

Tensor DiffusionConv::forward(Tape& tape, const Tensor& x, const SparseOperator& rw_out,
                              const SparseOperator& rw_in) const {
  if (x.cols() != in_) {
    throw ShapeError("DiffusionConv expects " + std::to_string(in_) + " input channels, got " +
                     std::to_string(x.cols()));
  }
  const std::vector<Tensor> wo = watch_all(tape, weights_out_);
  const std::vector<Tensor> wi = watch_all(tape, weights_in_);
  return diffusion_conv(x, rw_out, rw_in, wo, wi, tape.watch(*bias_));
}

Linear::Linear(ParameterStore& store, const std::string& prefix, std::size_t in_channels,
               std::size_t out_channels, Rng& rng)
    : weight_(&store.add(prefix + ".weight", glorot_uniform(in_channels, out_channels, rng))),
      bias_(&store.add(prefix + ".bias", Matrix(1, out_channels))) {}

Tensor Linear::forward(Tape& tape, const Tensor& x) const {
  return linear(x, tape.watch(*weight_), tape.watch(*bias_));
}

}  // namespace tgnn
