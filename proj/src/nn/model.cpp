#include "tgnn/nn/model.hpp"

#include <optional>

#include "tgnn/autodiff/ops.hpp"
#include "tgnn/errors.hpp"

namespace tgnn {

RecurrentState detach(const RecurrentState& state) {
  RecurrentState out;
  if (state.h.defined()) out.h = detach(state.h);
  if (state.c.defined()) out.c = detach(state.c);
  return out;
}

struct RecurrentGCN::Cells {
  std::optional<GConvGRUCell> gru;
  std::optional<GConvLSTMCell> lstm;
  std::optional<DCRNNCell> dcrnn;
  std::optional<Linear> readout;
};

RecurrentGCN::RecurrentGCN(const ModelConfig& config, std::uint64_t init_seed,
                           std::shared_ptr<OperatorCache> cache)
    : config_(config), init_seed_(init_seed),
      cache_(cache ? std::move(cache) : std::make_shared<OperatorCache>()),
      store_(std::make_unique<ParameterStore>()), cells_(std::make_unique<Cells>()) {
  config_.validate();
  Rng rng(init_seed);
  const std::size_t d = config_.in_channels;
  const std::size_t f = config_.filters;
  switch (config_.kind) {
    case ModelKind::gconv_gru:
      cells_->gru.emplace(*store_, "gconv_gru", d, f, config_.k, rng);
      break;
    case ModelKind::gconv_lstm:
      cells_->lstm.emplace(*store_, "gconv_lstm", d, f, config_.k, rng);
      break;
    case ModelKind::dcrnn:
      cells_->dcrnn.emplace(*store_, "dcrnn", d, f, config_.k, rng);
      break;
  }
  cells_->readout.emplace(*store_, "linear", f, 1, rng);
}

RecurrentGCN::~RecurrentGCN() = default;
RecurrentGCN::RecurrentGCN(RecurrentGCN&&) noexcept = default;
RecurrentGCN& RecurrentGCN::operator=(RecurrentGCN&&) noexcept = default;

ForwardResult RecurrentGCN::forward(Tape& tape, const Snapshot& snapshot,
                                    const RecurrentState& prev, bool training,
                                    Rng& dropout_rng) const {
  if (snapshot.num_features() != config_.in_channels) {
    throw ShapeError("snapshot t=" + std::to_string(snapshot.t) + " has " +
                     std::to_string(snapshot.num_features()) + " features, model expects " +
                     std::to_string(config_.in_channels));
  }
  return forward(tape, Tensor::constant(snapshot.x), snapshot.graph, prev, training, dropout_rng);
}

ForwardResult RecurrentGCN::forward(Tape& tape, const Tensor& x, const GraphPtr& graph,
                                    const RecurrentState& prev, bool training,
                                    Rng& dropout_rng) const {
  if (!graph) throw ConfigError("forward: null graph");
  if (x.cols() != config_.in_channels || x.rows() != graph->num_nodes()) {
    throw ShapeError("forward: features " + to_string(x.shape()) + " do not fit " +
                     std::to_string(graph->num_nodes()) + " nodes x " +
                     std::to_string(config_.in_channels) + " channels");
  }

  ForwardResult result;
  switch (config_.kind) {
    case ModelKind::gconv_gru: {
      const SparseOperator lhat =
          cache_->get(graph, OperatorKind::scaled_laplacian, config_.lambda_max);
      result.state.h = cells_->gru->forward(tape, x, prev.h, lhat);
      break;
    }
    case ModelKind::gconv_lstm: {
      const SparseOperator lhat =
          cache_->get(graph, OperatorKind::scaled_laplacian, config_.lambda_max);
      LstmState s = cells_->lstm->forward(tape, x, {prev.h, prev.c}, lhat);
      result.state = {std::move(s.h), std::move(s.c)};
      break;
    }
    case ModelKind::dcrnn: {
      const SparseOperator out = cache_->get(graph, OperatorKind::rw_out);
      const SparseOperator in = cache_->get(graph, OperatorKind::rw_in);
      result.state.h = cells_->dcrnn->forward(tape, x, prev.h, out, in);
      break;
    }
  }
  const Tensor hidden = dropout(relu(result.state.h), config_.dropout, training, dropout_rng);
  result.prediction = cells_->readout->forward(tape, hidden);
  return result;
}

}  // namespace tgnn
