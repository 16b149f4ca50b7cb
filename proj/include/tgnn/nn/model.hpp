#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "tgnn/nn/config.hpp"
#include "tgnn/nn/recurrent.hpp"
#include "tgnn/signal/temporal_signal.hpp"

namespace tgnn {

// Carried between snapshots. c is only used by gconv-lstm. Undefined tensors
// mean zeros.
struct RecurrentState {
  Tensor h;
  Tensor c;
};

// Same values with the tape history cut.
RecurrentState detach(const RecurrentState& state);

struct ForwardResult {
  Tensor prediction;  // [|V| x 1]
  RecurrentState state;
};

// One recurrent graph convolutional cell, then relu, dropout and a linear
// readout to one value per node.
class RecurrentGCN {
 public:
  static constexpr const char* kInitScheme = "glorot_uniform";

  // Parameters are drawn from an Rng seeded with init_seed, in a fixed order.
  RecurrentGCN(const ModelConfig& config, std::uint64_t init_seed,
               std::shared_ptr<OperatorCache> cache = nullptr);
  ~RecurrentGCN();
  RecurrentGCN(RecurrentGCN&&) noexcept;
  RecurrentGCN& operator=(RecurrentGCN&&) noexcept;

  ForwardResult forward(Tape& tape, const Snapshot& snapshot, const RecurrentState& prev,
                        bool training, Rng& dropout_rng) const;
  // Same, with features given as a (possibly tracked) tensor.
  ForwardResult forward(Tape& tape, const Tensor& x, const GraphPtr& graph,
                        const RecurrentState& prev, bool training, Rng& dropout_rng) const;

  const ModelConfig& config() const { return config_; }
  Hyperparameters hyperparameters() const { return inspect_hyperparameters(config_); }
  std::uint64_t init_seed() const { return init_seed_; }

  ParameterStore& parameters() { return *store_; }
  const ParameterStore& parameters() const { return *store_; }

 private:
  struct Cells;

  ModelConfig config_;
  std::uint64_t init_seed_;
  std::shared_ptr<OperatorCache> cache_;
  std::unique_ptr<ParameterStore> store_;
  std::unique_ptr<Cells> cells_;
};

// JSON container of hyperparameters, init record and every named parameter
// with its shape. Loading rebuilds the model from the stored config and seed,
// then overwrites each parameter; any missing, extra, or reshaped parameter is
// a DataError.
std::string checkpoint_to_string(const RecurrentGCN& model);
RecurrentGCN checkpoint_from_string(const std::string& text);
void save_checkpoint(const RecurrentGCN& model, const std::string& path);
RecurrentGCN load_checkpoint(const std::string& path);

}  // namespace tgnn
