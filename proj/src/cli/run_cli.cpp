#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tgnn/cli/commands.hpp"
#include "tgnn/data/dataset.hpp"
#include "tgnn/data/fetch.hpp"
#include "tgnn/data/synthetic.hpp"
#include "tgnn/errors.hpp"
#include "tgnn/kernels/kernels.hpp"

namespace tgnn::cli {

namespace {

std::string four_decimals(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out.flush()) throw Error("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct TrainFlags {
  TrainRun run;
  std::string model = "dcrnn";
  std::string regime = "incremental";
  std::string lambda_max = "2";
  std::size_t k = 0;
  CLI::Option* k_option = nullptr;
  bool no_timing = false;
  bool verbose = false;
  std::string out;
  std::string checkpoint;
  std::string replay;
  std::string cache_dir;
};

void add_train(CLI::App& app, TrainFlags& f) {
  auto* cmd = app.add_subcommand("train", "Train a recurrent graph model and evaluate it on the test split");
  cmd->add_option("--dataset", f.run.dataset, "Dataset JSON path or http(s) URL");
  cmd->add_option("--model", f.model, "gconv-gru, gconv-lstm or dcrnn")->capture_default_str();
  cmd->add_option("--filters", f.run.filters, "Hidden units of the recurrent cell")
      ->capture_default_str();
  f.k_option = cmd->add_option("--k", f.k,
                               "Chebyshev filter size (gconv-*) or diffusion order (dcrnn); "
                               "default 2 for gconv-*, 1 for dcrnn");
  cmd->add_option("--lr", f.run.lr, "Adam learning rate")->capture_default_str();
  cmd->add_option("--epochs", f.run.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--regime", f.regime, "incremental or cumulative")->capture_default_str();
  cmd->add_option("--train-ratio", f.run.train_ratio, "Fraction of snapshots used for training")
      ->capture_default_str();
  cmd->add_option("--seed", f.run.seed, "Seed for initialization and dropout")
      ->capture_default_str();
  cmd->add_option("--dropout", f.run.dropout, "Dropout rate before the readout")
      ->capture_default_str();
  cmd->add_option("--lambda-max", f.lambda_max, "Largest Laplacian eigenvalue: a number or 'exact'")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "Write the JSON train report here");
  cmd->add_option("--checkpoint", f.checkpoint, "Write the trained model here");
  cmd->add_option("--replay", f.replay,
                  "Re-run the configuration embedded in a train report and compare its metrics");
  cmd->add_option("--cache-dir", f.cache_dir, "Download cache (default $TGNN_CACHE_DIR)");
  cmd->add_flag("--no-timing", f.no_timing, "Record 0 s epoch times so reports are byte-identical");
  cmd->add_flag("--verbose", f.verbose, "Print the loss after every epoch");
}

int cmd_train(TrainFlags& f, std::ostream& out, std::ostream& err) {
  TrainRun run = f.run;
  std::optional<TrainReport> replayed;
  if (!f.replay.empty()) {
    replayed = report_from_string(read_text(f.replay));
    run = TrainRun::from_echo(replayed->config);
  } else {
    run.model = parse_model_kind(f.model);
    run.regime = parse_regime(f.regime);
    run.lambda_max = LambdaMax::parse(f.lambda_max);
    if (f.k_option->count() > 0) run.k = f.k;
    run.timing = !f.no_timing;
  }
  run.validate();

  const TemporalSignal signal = resolve_dataset(run.dataset, f.cache_dir);
  out << "dataset: " << to_string(signal.variant()) << ", " << signal.size() << " snapshots, "
      << signal.num_nodes() << " nodes, " << signal.num_features() << " features\n";
  out << "model: " << to_string(run.model) << " (filters " << run.filters << ", k "
      << run.resolved_k() << "), regime " << to_string(run.regime) << ", " << run.epochs
      << " epochs, kernels " << kernels::active().name << "\n";

  std::function<void(std::size_t, double)> progress;
  if (f.verbose) {
    progress = [&err](std::size_t epoch, double loss) {
      err << "epoch " << epoch + 1 << " loss " << loss << "\n";
    };
  }
  TrainOutcome outcome = run_training(run, signal, progress);
  const TrainReport& report = outcome.report;

  if (!f.out.empty()) write_text(f.out, report_to_string(report));
  if (!f.checkpoint.empty()) save_checkpoint(outcome.model, f.checkpoint);
  out << "optimizer steps: " << report.steps << ", final train loss " << report.losses.back()
      << "\n";

  int code = kOk;
  if (replayed) {
    const bool same = replayed->losses == report.losses && replayed->test_mse == report.test_mse &&
                      replayed->steps == report.steps;
    out << (same ? "replay: metrics reproduced exactly\n" : "replay: metrics differ\n");
    if (!same) code = kFailure;
  }
  out << "MSE: " << four_decimals(report.test_mse) << "\n";
  return code;
}

struct BenchmarkFlags {
  BenchmarkRun run;
  std::vector<std::string> regimes{"incremental", "cumulative"};
  std::string out;
};

void add_benchmark(CLI::App& app, BenchmarkFlags& f) {
  auto* cmd = app.add_subcommand(
      "benchmark", "Time GConvGRU training epochs on synthetic dynamic graph sequences");
  cmd->add_option("--nodes", f.run.nodes, "Comma-separated node counts")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--k", f.run.k, "Edges per node (capped at n/2)")->capture_default_str();
  cmd->add_option("--features", f.run.features, "Node features")->capture_default_str();
  cmd->add_option("--snapshots", f.run.snapshots, "Snapshots per sequence")->capture_default_str();
  cmd->add_option("--p", f.run.p, "Watts-Strogatz rewiring probability")->capture_default_str();
  cmd->add_option("--filters", f.run.filters, "GConvGRU hidden units")->capture_default_str();
  cmd->add_option("--cheb-k", f.run.cheb_k, "Chebyshev filter size")->capture_default_str();
  cmd->add_option("--repeats", f.run.repeats, "Timed epochs per size and regime")
      ->capture_default_str();
  cmd->add_option("--regimes", f.regimes, "Comma-separated regimes")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--seed", f.run.seed, "Seed for the graphs, features and models")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "Write the JSON benchmark report here");
}

int cmd_benchmark(BenchmarkFlags& f, std::ostream& out) {
  BenchmarkRun run = f.run;
  run.regimes.clear();
  for (const std::string& r : f.regimes) run.regimes.push_back(parse_regime(r));
  run.validate();
  out << "kernels " << kernels::active().name << "\n";
  const auto cells = run_benchmark(run, [&out](const BenchmarkCell& c) {
    char line[160];
    std::snprintf(line, sizeof line, "n=%zu k=%zu %-11s mean %.4f s  std %.4f s  (%zu runs)\n",
                  c.nodes, c.k, to_string(c.regime).c_str(), c.mean, c.stddev, c.seconds.size());
    out << line << std::flush;
  });
  if (!f.out.empty()) write_text(f.out, benchmark_report_to_string(run, cells));
  return kOk;
}

struct GenerateFlags {
  std::size_t nodes = 64;
  std::size_t k = 4;
  double p = 0.1;
  std::size_t snapshots = 120;
  std::size_t features = 4;
  std::uint64_t seed = 0;
  double noise = 0.01;
  std::string out;
};

void add_generate(CLI::App& app, GenerateFlags& diffusion, GenerateFlags& bench) {
  auto* cmd = app.add_subcommand("generate", "Write a synthetic dataset as JSON");
  cmd->require_subcommand(1);
  auto common = [](CLI::App* sub, GenerateFlags& f) {
    sub->add_option("--nodes", f.nodes, "Node count")->capture_default_str();
    sub->add_option("--k", f.k, "Watts-Strogatz neighbours per node")->capture_default_str();
    sub->add_option("--p", f.p, "Rewiring probability")->capture_default_str();
    sub->add_option("--snapshots", f.snapshots, "Snapshots")->capture_default_str();
    sub->add_option("--features", f.features, "Node features")->capture_default_str();
    sub->add_option("--seed", f.seed, "Seed")->capture_default_str();
    sub->add_option("--out", f.out, "Output path")->required();
  };
  auto* diff = cmd->add_subcommand("diffusion", "Static graph, random-walk diffusion features");
  common(diff, diffusion);
  diff->add_option("--noise", diffusion.noise, "Noise standard deviation")->capture_default_str();
  bench.nodes = 1024;
  bench.k = 32;
  bench.snapshots = 100;
  bench.features = 32;
  auto* seq = cmd->add_subcommand("benchmark", "Dynamic graphs, uniform features, binary targets");
  common(seq, bench);
}

int cmd_generate(const CLI::App& generate, const GenerateFlags& diffusion,
                 const GenerateFlags& bench, std::ostream& out) {
  TemporalSignal signal = [&] {
    if (generate.got_subcommand("diffusion")) {
      const GenerateFlags& f = diffusion;
      return synthetic_diffusion_dataset(f.nodes, f.k, f.p, f.snapshots, f.features, f.seed,
                                         f.noise);
    }
    const GenerateFlags& f = bench;
    return synthetic_benchmark_sequence({f.nodes, f.k, f.features, f.snapshots, f.p, f.seed});
  }();
  const bool is_diffusion = generate.got_subcommand("diffusion");
  const std::string& path = is_diffusion ? diffusion.out : bench.out;
  DatasetMetadata meta;
  meta.name = is_diffusion ? "synthetic-diffusion" : "synthetic-benchmark";
  meta.time_span = std::to_string(signal.size()) + " steps";
  save_dataset(signal, meta, path);
  out << "wrote " << path << " (" << signal.size() << " snapshots, " << signal.num_nodes()
      << " nodes)\n";
  return kOk;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recurrent graph convolutional networks for spatiotemporal graph signals", "tgnn"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  TrainFlags train;
  add_train(app, train);
  BenchmarkFlags bench;
  add_benchmark(app, bench);

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect", "Summarize a dataset, checkpoint or train report");
  inspect->add_option("path", inspect_path, "File to inspect")->required();

  std::string fetch_url;
  std::string fetch_cache;
  auto* fetch = app.add_subcommand("fetch", "Download a dataset into the cache and print its path");
  fetch->add_option("url", fetch_url, "http(s) URL")->required();
  fetch->add_option("--cache-dir", fetch_cache, "Download cache (default $TGNN_CACHE_DIR)");

  GenerateFlags gen_diffusion;
  GenerateFlags gen_bench;
  add_generate(app, gen_diffusion, gen_bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (app.got_subcommand("train")) return cmd_train(train, out, err);
  if (app.got_subcommand("benchmark")) return cmd_benchmark(bench, out);
  if (app.got_subcommand("inspect")) {
    out << inspect_file(inspect_path);
    return kOk;
  }
  if (app.got_subcommand("fetch")) {
    out << fetch_dataset(fetch_url, fetch_cache.empty() ? default_cache_dir() : fetch_cache)
        << "\n";
    return kOk;
  }
  return cmd_generate(*app.get_subcommand("generate"), gen_diffusion, gen_bench, out);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(argc, argv, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kDatasetError;
  } catch (const NumericError& e) {
    err << "error: numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace tgnn::cli
