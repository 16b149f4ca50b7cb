#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "tgnn/cli/commands.hpp"
#include "tgnn/data/synthetic.hpp"
#include "tgnn/errors.hpp"

namespace tgnn::cli {

void BenchmarkRun::validate() const {
  if (nodes.empty()) throw ConfigError("--nodes needs at least one size");
  for (std::size_t n : nodes) {
    if (n < 4) throw ConfigError("every --nodes entry must be >= 4");
  }
  if (k < 2) throw ConfigError("--k must be >= 2");
  if (features == 0) throw ConfigError("--features must be positive");
  if (snapshots == 0) throw ConfigError("--snapshots must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("--p must be in [0, 1]");
  if (filters == 0) throw ConfigError("--filters must be positive");
  if (cheb_k == 0) throw ConfigError("--cheb-k must be >= 1");
  if (repeats == 0) throw ConfigError("--repeats must be positive");
  if (regimes.empty()) throw ConfigError("--regimes needs at least one regime");
}

namespace {

// Largest even value <= min(k, n / 2).
std::size_t capped_k(std::size_t k, std::size_t n) {
  std::size_t out = std::min(k, n / 2);
  return out - out % 2;
}

double epoch_seconds(Regime regime, const BenchmarkRun& run, const TemporalSignal& signal,
                     const std::shared_ptr<OperatorCache>& cache, std::uint64_t seed) {
  const ModelConfig config(ModelKind::gconv_gru, run.features, run.filters, run.cheb_k,
                           LambdaMax::fixed(2.0), 0.5);
  RecurrentGCN model(config, seed, cache);
  Adam optimizer(model.parameters(), AdamOptions{});
  Rng dropout_rng(seed + 1);
  TrainOptions options;
  options.epochs = 1;
  return train(regime, model, signal, optimizer, dropout_rng, options).epoch_seconds.front();
}

}  // namespace

std::vector<BenchmarkCell> run_benchmark(const BenchmarkRun& run,
                                         const std::function<void(const BenchmarkCell&)>& on_cell) {
  run.validate();
  std::vector<BenchmarkCell> cells;
  for (std::size_t n : run.nodes) {
    BenchmarkSequenceOptions gen;
    gen.n = n;
    gen.k = capped_k(run.k, n);
    gen.d = run.features;
    gen.steps = run.snapshots;
    gen.p = run.p;
    gen.seed = run.seed + n;
    const TemporalSignal signal = synthetic_benchmark_sequence(gen);
    auto cache = std::make_shared<OperatorCache>();

    std::vector<BenchmarkCell> row(run.regimes.size());
    for (std::size_t i = 0; i < run.regimes.size(); ++i) {
      row[i].nodes = n;
      row[i].k = gen.k;
      row[i].regime = run.regimes[i];
      epoch_seconds(run.regimes[i], run, signal, cache, run.seed);  // warm-up, builds operators
    }
    for (std::size_t r = 0; r < run.repeats; ++r) {
      for (std::size_t j = 0; j < run.regimes.size(); ++j) {
        const std::size_t i = r % 2 == 0 ? j : run.regimes.size() - 1 - j;
        row[i].seconds.push_back(epoch_seconds(run.regimes[i], run, signal, cache, run.seed + r));
      }
    }
    for (BenchmarkCell& cell : row) {
      const double count = static_cast<double>(cell.seconds.size());
      cell.mean = std::accumulate(cell.seconds.begin(), cell.seconds.end(), 0.0) / count;
      double ss = 0.0;
      for (double s : cell.seconds) ss += (s - cell.mean) * (s - cell.mean);
      cell.stddev = cell.seconds.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
      if (on_cell) on_cell(cell);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::string benchmark_report_to_string(const BenchmarkRun& run,
                                       const std::vector<BenchmarkCell>& cells) {
  using Json = nlohmann::ordered_json;
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["library_version"] = library_version();
  Json regimes = Json::array();
  for (Regime r : run.regimes) regimes.push_back(to_string(r));
  doc["config"] = {{"command", "benchmark"},
                   {"model", to_string(ModelKind::gconv_gru)},
                   {"nodes", run.nodes},
                   {"k", run.k},
                   {"features", run.features},
                   {"snapshots", run.snapshots},
                   {"p", run.p},
                   {"filters", run.filters},
                   {"cheb_k", run.cheb_k},
                   {"repeats", run.repeats},
                   {"regimes", std::move(regimes)},
                   {"seed", run.seed}};
  doc["seed"] = run.seed;
  Json results = Json::array();
  for (const BenchmarkCell& c : cells) {
    results.push_back({{"nodes", c.nodes},
                       {"k", c.k},
                       {"regime", to_string(c.regime)},
                       {"mean_seconds", c.mean},
                       {"std_seconds", c.stddev},
                       {"seconds", c.seconds}});
  }
  doc["results"] = std::move(results);
  return doc.dump(2) + "\n";
}

}  // namespace tgnn::cli
