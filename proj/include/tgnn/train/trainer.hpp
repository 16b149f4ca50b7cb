#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tgnn/nn/model.hpp"
#include "tgnn/train/adam.hpp"

namespace tgnn {

enum class Regime { incremental, cumulative };

std::string to_string(Regime regime);
Regime parse_regime(const std::string& text);

struct TrainOptions {
  std::size_t epochs = 100;
  bool measure_time = true;  // false records 0 seconds for every epoch
  // Called after every epoch with its index and training loss.
  std::function<void(std::size_t, double)> on_epoch;
};

struct TrainResult {
  std::vector<double> losses;         // one per epoch
  std::vector<double> epoch_seconds;  // one per epoch
};

// Hidden state starts at zero each epoch and is carried across the epoch's
// snapshots. dropout_rng drives the dropout masks.
//
// Cumulative: the epoch's T snapshot losses are summed on one tape, divided by
// T, and backpropagated once, followed by one optimizer step. Loss is that mean.
TrainResult train_cumulative(RecurrentGCN& model, const TemporalSignal& train, Adam& optimizer,
                             Rng& dropout_rng, const TrainOptions& options);

// Incremental: every snapshot's loss is backpropagated on its own and followed
// by an optimizer step; the hidden state passed on is detached. Loss is the
// mean of the epoch's snapshot losses.
TrainResult train_incremental(RecurrentGCN& model, const TemporalSignal& train, Adam& optimizer,
                              Rng& dropout_rng, const TrainOptions& options);

TrainResult train(Regime regime, RecurrentGCN& model, const TemporalSignal& train,
                  Adam& optimizer, Rng& dropout_rng, const TrainOptions& options);

// Mean over snapshots of the per-snapshot MSE with dropout off and hidden state
// carried from zero. Never touches parameters.
double evaluate_mse(const RecurrentGCN& model, const TemporalSignal& test);

}  // namespace tgnn
