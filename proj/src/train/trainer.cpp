#include "tgnn/train/trainer.hpp"

#include <chrono>
#include <cmath>

#include "tgnn/autodiff/ops.hpp"
#include "tgnn/errors.hpp"

namespace tgnn {

std::string to_string(Regime regime) {
  return regime == Regime::incremental ? "incremental" : "cumulative";
}

Regime parse_regime(const std::string& text) {
  if (text == "incremental") return Regime::incremental;
  if (text == "cumulative") return Regime::cumulative;
  throw ConfigError("unknown regime '" + text + "' (expected incremental or cumulative)");
}

namespace {

using Clock = std::chrono::steady_clock;

Tensor snapshot_loss(const Tensor& prediction, const Snapshot& s) {
  const Tensor target = Tensor::constant(s.y);
  return s.mask ? masked_mse_loss(prediction, target, *s.mask) : mse_loss(prediction, target);
}

void require_nonempty(const TemporalSignal& signal, const char* what) {
  if (signal.empty()) throw ConfigError(std::string(what) + " signal is empty");
}

void check_loss(double loss, std::size_t epoch) {
  if (!std::isfinite(loss)) {
    throw NumericError("training loss is not finite in epoch " + std::to_string(epoch + 1));
  }
}

template <typename EpochFn>
TrainResult run_epochs(const TrainOptions& options, EpochFn epoch_fn) {
  TrainResult result;
  result.losses.reserve(options.epochs);
  result.epoch_seconds.reserve(options.epochs);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    const auto start = Clock::now();
    const double loss = epoch_fn(epoch);
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    check_loss(loss, epoch);
    result.losses.push_back(loss);
    result.epoch_seconds.push_back(options.measure_time ? elapsed.count() : 0.0);
    if (options.on_epoch) options.on_epoch(epoch, loss);
  }
  return result;
}

}  // namespace

TrainResult train_cumulative(RecurrentGCN& model, const TemporalSignal& train, Adam& optimizer,
                             Rng& dropout_rng, const TrainOptions& options) {
  require_nonempty(train, "training");
  return run_epochs(options, [&](std::size_t) {
    Tape tape;
    RecurrentState state;
    Tensor cost;
    for (const Snapshot& s : train) {
      ForwardResult out = model.forward(tape, s, state, true, dropout_rng);
      const Tensor loss = snapshot_loss(out.prediction, s);
      cost = cost.defined() ? add(cost, loss) : loss;
      state = std::move(out.state);
    }
    cost = scale(cost, 1.0 / static_cast<double>(train.size()));
    tape.backward(cost);
    optimizer.step();
    optimizer.zero_grad();
    return cost.item();
  });
}

TrainResult train_incremental(RecurrentGCN& model, const TemporalSignal& train, Adam& optimizer,
                              Rng& dropout_rng, const TrainOptions& options) {
  require_nonempty(train, "training");
  return run_epochs(options, [&](std::size_t) {
    RecurrentState state;
    double total = 0.0;
    for (const Snapshot& s : train) {
      Tape tape;
      ForwardResult out = model.forward(tape, s, state, true, dropout_rng);
      const Tensor loss = snapshot_loss(out.prediction, s);
      tape.backward(loss);
      optimizer.step();
      optimizer.zero_grad();
      total += loss.item();
      state = detach(out.state);
    }
    return total / static_cast<double>(train.size());
  });
}

TrainResult train(Regime regime, RecurrentGCN& model, const TemporalSignal& signal,
                  Adam& optimizer, Rng& dropout_rng, const TrainOptions& options) {
  return regime == Regime::incremental
             ? train_incremental(model, signal, optimizer, dropout_rng, options)
             : train_cumulative(model, signal, optimizer, dropout_rng, options);
}

double evaluate_mse(const RecurrentGCN& model, const TemporalSignal& test) {
  require_nonempty(test, "test");
  Tape tape(Tape::Mode::inference);
  Rng unused(0);
  RecurrentState state;
  double total = 0.0;
  for (const Snapshot& s : test) {
    ForwardResult out = model.forward(tape, s, state, false, unused);
    total += snapshot_loss(out.prediction, s).item();
    state = std::move(out.state);
  }
  return total / static_cast<double>(test.size());
}

}  // namespace tgnn
