#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tgnn/nn/model.hpp"
#include "tgnn/train/report.hpp"
#include "tgnn/train/trainer.hpp"

namespace tgnn::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kDatasetError = 2,
  kNumericError = 3,
  kFailure = 4,  // I/O failure, replay mismatch, anything else
};

struct TrainRun {
  std::string dataset;  // path or http(s) URL
  ModelKind model = ModelKind::dcrnn;
  std::size_t filters = 32;
  std::optional<std::size_t> k;  // defaults to 1 for dcrnn, 2 otherwise
  double lr = 0.01;
  std::size_t epochs = 100;
  Regime regime = Regime::incremental;
  double train_ratio = 0.9;
  std::uint64_t seed = 0;
  double dropout = 0.5;
  LambdaMax lambda_max = LambdaMax::fixed(2.0);
  bool timing = true;

  std::size_t resolved_k() const;
  // Throws ConfigError before any work starts.
  void validate() const;
  // Every field in a fixed order, as written into the report.
  Hyperparameters echo() const;
  static TrainRun from_echo(const Hyperparameters& values);
};

struct TrainOutcome {
  TrainReport report;
  RecurrentGCN model;
};

// Path as is, or a URL resolved through the fetch cache.
TemporalSignal resolve_dataset(const std::string& dataset, const std::string& cache_dir);

// split -> build model from seed -> train -> evaluate on the test part.
TrainOutcome run_training(const TrainRun& run, const TemporalSignal& signal,
                          const std::function<void(std::size_t, double)>& on_epoch = {});

struct BenchmarkRun {
  std::vector<std::size_t> nodes{64, 128, 256, 512, 1024};
  std::size_t k = 32;  // edges per node, capped at n / 2
  std::size_t features = 32;
  std::size_t snapshots = 100;
  double p = 0.1;
  std::size_t filters = 32;
  std::size_t cheb_k = 2;
  std::size_t repeats = 10;
  std::vector<Regime> regimes{Regime::incremental, Regime::cumulative};
  std::uint64_t seed = 0;

  void validate() const;
};

struct BenchmarkCell {
  std::size_t nodes = 0;
  std::size_t k = 0;
  Regime regime = Regime::incremental;
  std::vector<double> seconds;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
};

// For every size: one untimed warm-up epoch per regime, then `repeats` rounds
// timing one GConvGRU epoch per regime. The regime order alternates between
// rounds. Runs sequentially.
std::vector<BenchmarkCell> run_benchmark(const BenchmarkRun& run,
                                         const std::function<void(const BenchmarkCell&)>& on_cell = {});
std::string benchmark_report_to_string(const BenchmarkRun& run,
                                       const std::vector<BenchmarkCell>& cells);

// Multi-line human summary of a dataset, checkpoint, or report file.
std::string inspect_file(const std::string& path);

// Entry point of the tgnn binary.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tgnn::cli
