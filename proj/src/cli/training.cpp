#include <cmath>
#include <map>

#include "tgnn/cli/commands.hpp"
#include "tgnn/data/dataset.hpp"
#include "tgnn/data/fetch.hpp"
#include "tgnn/errors.hpp"

namespace tgnn::cli {

namespace {

// Dropout masks draw from a stream separate from parameter initialization.
constexpr std::uint64_t kDropoutStream = 0x9e3779b97f4a7c15ULL;

}  // namespace

std::size_t TrainRun::resolved_k() const {
  if (k) return *k;
  return model == ModelKind::dcrnn ? 1 : 2;
}

void TrainRun::validate() const {
  if (dataset.empty()) throw ConfigError("--dataset is required");
  if (filters == 0) throw ConfigError("--filters must be positive");
  if (model != ModelKind::dcrnn && resolved_k() == 0) {
    throw ConfigError("--k must be >= 1 for " + to_string(model));
  }
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw ConfigError("--lr must be finite and >= 0");
  if (epochs == 0) throw ConfigError("--epochs must be positive");
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw ConfigError("--train-ratio must be in (0, 1)");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("--dropout must be in [0, 1)");
}

Hyperparameters TrainRun::echo() const {
  return {
      {"command", std::string("train")},
      {"dataset", dataset},
      {"model", to_string(model)},
      {"filters", static_cast<std::int64_t>(filters)},
      {"k", static_cast<std::int64_t>(resolved_k())},
      {"lr", lr},
      {"epochs", static_cast<std::int64_t>(epochs)},
      {"regime", to_string(regime)},
      {"train_ratio", train_ratio},
      {"seed", static_cast<std::int64_t>(seed)},
      {"dropout", dropout},
      {"lambda_max", lambda_max.to_string()},
      {"timing", std::string(timing ? "on" : "off")},
  };
}

TrainRun TrainRun::from_echo(const Hyperparameters& values) {
  std::map<std::string, HyperValue> by_name(values.begin(), values.end());
  auto get = [&](const char* name) -> const HyperValue& {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw ConfigError(std::string("report config lacks '") + name + "'");
    return it->second;
  };
  auto text = [&](const char* name) {
    const auto* s = std::get_if<std::string>(&get(name));
    if (s == nullptr) throw ConfigError(std::string("report config '") + name + "' is not text");
    return *s;
  };
  auto count = [&](const char* name) {
    const auto* i = std::get_if<std::int64_t>(&get(name));
    if (i == nullptr || *i < 0) {
      throw ConfigError(std::string("report config '") + name + "' is not a count");
    }
    return static_cast<std::uint64_t>(*i);
  };
  auto real = [&](const char* name) {
    const HyperValue& v = get(name);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw ConfigError(std::string("report config '") + name + "' is not a number");
  };

  if (text("command") != "train") throw ConfigError("report was not produced by 'train'");
  TrainRun run;
  run.dataset = text("dataset");
  run.model = parse_model_kind(text("model"));
  run.filters = count("filters");
  run.k = count("k");
  run.lr = real("lr");
  run.epochs = count("epochs");
  run.regime = parse_regime(text("regime"));
  run.train_ratio = real("train_ratio");
  run.seed = count("seed");
  run.dropout = real("dropout");
  run.lambda_max = LambdaMax::parse(text("lambda_max"));
  run.timing = text("timing") == "on";
  run.validate();
  return run;
}

TemporalSignal resolve_dataset(const std::string& dataset, const std::string& cache_dir) {
  if (is_url(dataset)) {
    return load_dataset(fetch_dataset(dataset, cache_dir.empty() ? default_cache_dir() : cache_dir));
  }
  return load_dataset(dataset);
}

TrainOutcome run_training(const TrainRun& run, const TemporalSignal& signal,
                          const std::function<void(std::size_t, double)>& on_epoch) {
  run.validate();
  auto [train_part, test_part] = temporal_signal_split(signal, run.train_ratio);

  const ModelConfig config(run.model, signal.num_features(), run.filters, run.resolved_k(),
                           run.lambda_max, run.dropout);
  RecurrentGCN model(config, run.seed);
  Adam optimizer(model.parameters(), AdamOptions{run.lr});
  Rng dropout_rng(run.seed ^ kDropoutStream);

  TrainOptions options;
  options.epochs = run.epochs;
  options.measure_time = run.timing;
  options.on_epoch = on_epoch;
  TrainResult result = train(run.regime, model, train_part, optimizer, dropout_rng, options);

  TrainReport report;
  report.config = run.echo();
  report.seed = run.seed;
  report.losses = std::move(result.losses);
  report.epoch_seconds = std::move(result.epoch_seconds);
  report.test_mse = evaluate_mse(model, test_part);
  report.steps = optimizer.steps();
  return {std::move(report), std::move(model)};
}

}  // namespace tgnn::cli
