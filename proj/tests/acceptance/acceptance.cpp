// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oracles.hpp"
#include "tgnn/autodiff/ops.hpp"
#include "tgnn/cli/commands.hpp"
#include "tgnn/data/dataset.hpp"
#include "tgnn/data/synthetic.hpp"
#include "tgnn/errors.hpp"
#include "tgnn/graph/sparse.hpp"
#include "tgnn/nn/layers.hpp"
#include "tgnn/nn/model.hpp"
#include "tgnn/nn/recurrent.hpp"
#include "tgnn/train/adam.hpp"
#include "tgnn/train/report.hpp"
#include "tgnn/train/trainer.hpp"

namespace {

using namespace tgnn;
using testing::random_graph;
using testing::random_matrix;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string format(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<Parameter*> all_parameters(ParameterStore& store) {
  std::vector<Parameter*> out;
  for (Parameter& p : store) out.push_back(&p);
  return out;
}

void randomize(ParameterStore& store, Rng& rng) {
  for (Parameter& p : store) p.value = random_matrix(p.value.rows(), p.value.cols(), rng, 0.5);
}

Tensor contract(const Tensor& y, std::uint64_t seed) {
  Rng rng(seed);
  return sum(hadamard(y, Tensor(random_matrix(y.rows(), y.cols(), rng))));
}

// 1. Gradient fidelity.

Outcome gradient_fidelity() {
  const auto start = Clock::now();
  constexpr int kTrials = 6;
  double worst = 0.0;
  std::string worst_where;
  std::size_t checked = 0;

  auto record = [&](const std::string& component, int trial, const testing::GradCheck& r) {
    checked += r.tensors;
    if (r.worst > worst || worst_where.empty()) {
      worst = std::max(worst, r.worst);
      worst_where = component + " trial " + std::to_string(trial) + " " + r.worst_name;
    }
  };

  for (int trial = 0; trial < kTrials; ++trial) {
    Rng rng(1000 + trial);
    const std::size_t n = pick(rng, 2, 8), d = pick(rng, 1, 4), f = pick(rng, 1, 4);
    const auto graph = std::make_shared<const Graph>(random_graph(n, 0.4, rng, trial % 2 == 0));
    const SparseOperator lhat =
        scaled_laplacian(*graph, trial % 2 == 0 ? LambdaMax::exact() : LambdaMax::fixed(2.0));
    const RandomWalkPair rw = random_walk_matrices(*graph);
    const std::uint64_t cs = 50 + trial;

    auto sequence = [&](std::size_t width, std::size_t hidden) {
      std::vector<std::pair<std::string, Matrix>> in;
      for (int t = 0; t < 3; ++t) in.emplace_back("x" + std::to_string(t), random_matrix(n, width, rng));
      in.emplace_back("h0", random_matrix(n, hidden, rng, 0.5));
      return in;
    };

    {
      ParameterStore store;
      const ChebConv conv(store, "cheb", d, f, pick(rng, 1, 3), rng);
      randomize(store, rng);
      record("ChebConv", trial,
             testing::check_gradients(all_parameters(store), {{"x", random_matrix(n, d, rng)}},
                                      [&](Tape& tape, const std::vector<Tensor>& v) {
                                        return contract(tanh(conv.forward(tape, v[0], lhat)), cs);
                                      }));
    }
    {
      ParameterStore store;
      const DiffusionConv conv(store, "diff", d, f, pick(rng, 0, 2), rng);
      randomize(store, rng);
      record("DiffusionConv", trial,
             testing::check_gradients(all_parameters(store), {{"x", random_matrix(n, d, rng)}},
                                      [&](Tape& tape, const std::vector<Tensor>& v) {
                                        return contract(tanh(conv.forward(tape, v[0], rw.out, rw.in)), cs);
                                      }));
    }
    {
      ParameterStore store;
      const Linear lin(store, "lin", d, f, rng);
      randomize(store, rng);
      record("Linear", trial,
             testing::check_gradients(all_parameters(store), {{"x", random_matrix(n, d, rng)}},
                                      [&](Tape& tape, const std::vector<Tensor>& v) {
                                        return contract(lin.forward(tape, v[0]), cs);
                                      }));
    }
    {
      ParameterStore store;
      const GConvGRUCell cell(store, "gru", d, f, pick(rng, 1, 3), rng);
      randomize(store, rng);
      record("GConvGRU", trial,
             testing::check_gradients(all_parameters(store), sequence(d, f),
                                      [&](Tape& tape, const std::vector<Tensor>& v) {
                                        Tensor h = v[3];
                                        for (int t = 0; t < 3; ++t) h = cell.forward(tape, v[t], h, lhat);
                                        return contract(h, cs);
                                      }));
    }
    {
      ParameterStore store;
      const GConvLSTMCell cell(store, "lstm", d, f, pick(rng, 1, 3), rng);
      randomize(store, rng);
      auto inputs = sequence(d, f);
      inputs.emplace_back("c0", random_matrix(n, f, rng, 0.5));
      record("GConvLSTM", trial,
             testing::check_gradients(all_parameters(store), inputs,
                                      [&](Tape& tape, const std::vector<Tensor>& v) {
                                        LstmState s{v[3], v[4]};
                                        for (int t = 0; t < 3; ++t) s = cell.forward(tape, v[t], s, lhat);
                                        return add(contract(s.h, cs), contract(s.c, cs + 1));
                                      }));
    }
    {
      ParameterStore store;
      const DCRNNCell cell(store, "dcrnn", d, f, pick(rng, 0, 2), rng);
      randomize(store, rng);
      record("DCRNN", trial,
             testing::check_gradients(all_parameters(store), sequence(d, f),
                                      [&](Tape& tape, const std::vector<Tensor>& v) {
                                        Tensor h = v[3];
                                        for (int t = 0; t < 3; ++t) h = cell.forward(tape, v[t], h, rw.out, rw.in);
                                        return contract(h, cs);
                                      }));
    }
    for (ModelKind kind : {ModelKind::gconv_gru, ModelKind::gconv_lstm, ModelKind::dcrnn}) {
      std::vector<GraphPtr> graphs;
      std::vector<std::pair<std::string, Matrix>> inputs;
      std::vector<Matrix> targets;
      for (int t = 0; t < 3; ++t) {
        graphs.push_back(std::make_shared<const Graph>(random_graph(n, 0.4, rng)));
        inputs.emplace_back("x" + std::to_string(t), random_matrix(n, d, rng));
        targets.push_back(random_matrix(n, 1, rng));
      }
      const std::size_t k = kind == ModelKind::dcrnn ? pick(rng, 0, 2) : pick(rng, 1, 3);
      RecurrentGCN model(ModelConfig(kind, d, f, k, LambdaMax::exact(), 0.5), 9 + trial);
      randomize(model.parameters(), rng);
      record("RecurrentGCN/" + to_string(kind), trial,
             testing::check_gradients(all_parameters(model.parameters()), inputs,
                                      [&](Tape& tape, const std::vector<Tensor>& v) {
                                        Rng drop(123);
                                        RecurrentState state;
                                        Tensor loss;
                                        for (std::size_t t = 0; t < 3; ++t) {
                                          ForwardResult out = model.forward(tape, v[t], graphs[t], state, true, drop);
                                          const Tensor l = mse_loss(out.prediction, Tensor(targets[t]));
                                          loss = loss.defined() ? add(loss, l) : l;
                                          state = out.state;
                                        }
                                        return loss;
                                      }));
    }
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = worst < 1e-4 && elapsed < 60.0;
  o.detail = std::to_string(checked) + " gradient tensors, worst relative error " + format("%.2e", worst) +
             " at " + worst_where + ", " + format("%.1f s", elapsed);
  return o;
}

// 2. Sparse operators against dense matrix powers.

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  double worst_cheb = 0.0, worst_diff = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(2000 + trial);
    const std::size_t n = pick(rng, 1, 16), d = pick(rng, 1, 4), f = pick(rng, 1, 4);
    const Graph g = random_graph(n, std::uniform_real_distribution<double>(0.05, 0.6)(rng), rng, trial % 3 == 0);
    const Matrix x = random_matrix(n, d, rng);
    const Matrix b = random_matrix(1, f, rng);

    const double lambda = trial % 2 == 0 ? 2.0 : estimate_lambda_max(g);
    const SparseOperator lhat = scaled_laplacian(g, LambdaMax::fixed(lambda));
    std::vector<Matrix> w;
    std::vector<Tensor> wt;
    for (std::size_t i = 0, k = pick(rng, 1, 5); i < k; ++i) {
      w.push_back(random_matrix(d, f, rng));
      wt.emplace_back(w.back());
    }
    const Matrix cheb = cheb_conv(Tensor(x), lhat, wt, Tensor(b)).value();
    worst_cheb = std::max(worst_cheb, max_abs_diff(cheb, testing::dense_cheb_conv(
                                                             x, testing::dense_scaled_laplacian(g, lambda), w, b)));

    const RandomWalkPair rw = random_walk_matrices(g);
    std::vector<Matrix> wo, wi;
    std::vector<Tensor> wot, wit;
    for (std::size_t i = 0, k = pick(rng, 0, 4); i <= k; ++i) {
      wo.push_back(random_matrix(d, f, rng));
      wi.push_back(random_matrix(d, f, rng));
      wot.emplace_back(wo.back());
      wit.emplace_back(wi.back());
    }
    const Matrix diff = diffusion_conv(Tensor(x), rw.out, rw.in, wot, wit, Tensor(b)).value();
    worst_diff = std::max(worst_diff, max_abs_diff(diff, testing::dense_diffusion_conv(x, testing::dense_rw_out(g),
                                                                                        testing::dense_rw_in(g), wo,
                                                                                        wi, b)));
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = worst_cheb < 1e-10 && worst_diff < 1e-10 && elapsed < 10.0;
  o.detail = "100 graphs, max abs error cheb " + format("%.2e", worst_cheb) + ", diffusion " +
             format("%.2e", worst_diff) + ", " + format("%.2f s", elapsed);
  return o;
}

// 3. Optimizer step counts per regime.

Outcome step_law() {
  const TemporalSignal signal = synthetic_diffusion_dataset(8, 2, 0.1, 90, 2, 3);
  std::uint64_t counts[2] = {0, 0};
  const Regime regimes[2] = {Regime::cumulative, Regime::incremental};
  for (int i = 0; i < 2; ++i) {
    RecurrentGCN model(ModelConfig(ModelKind::gconv_gru, 2, 2, 1, LambdaMax::fixed(2.0), 0.5), 1);
    Adam optimizer(model.parameters(), AdamOptions{0.01});
    Rng drop(2);
    TrainOptions options;
    options.epochs = 100;
    options.measure_time = false;
    train(regimes[i], model, signal, optimizer, drop, options);
    counts[i] = optimizer.steps();
  }
  Outcome o;
  o.pass = counts[0] == 100 && counts[1] == 9000;
  o.detail = "T=90, 100 epochs: cumulative " + std::to_string(counts[0]) + " steps, incremental " +
             std::to_string(counts[1]) + " steps";
  return o;
}

// 4. Split arithmetic and shared storage.

Outcome split_arithmetic() {
  Outcome o;
  std::ostringstream detail;
  for (const auto& [steps, want_train] : {std::pair<std::size_t, std::size_t>{100, 90}, {10, 9}}) {
    Rng rng(steps);
    const auto graph = std::make_shared<const Graph>(random_graph(6, 0.3, rng));
    std::vector<Matrix> xs, ys;
    for (std::size_t t = 0; t < steps; ++t) {
      xs.push_back(random_matrix(6, 2, rng));
      ys.push_back(random_matrix(6, 1, rng));
    }
    const TemporalSignal s = TemporalSignal::static_graph(graph, xs, ys);
    const auto [train_part, test_part] = temporal_signal_split(s, 0.9);

    bool ok = train_part.size() == want_train && test_part.size() == steps - want_train;
    ok = ok && train_part.storage_identity() == s.storage_identity() &&
         test_part.storage_identity() == s.storage_identity();
    std::vector<Snapshot> joined;
    for (const Snapshot& snap : train_part) joined.push_back(snap);
    for (const Snapshot& snap : test_part) joined.push_back(snap);
    ok = ok && joined.size() == steps;
    for (std::size_t t = 0; ok && t < steps; ++t) {
      ok = joined[t].x == s[t].x && joined[t].y == s[t].y && joined[t].t == s[t].t &&
           joined[t].graph.get() == graph.get();
    }
    o.pass = o.pass && ok;
    detail << "T=" << steps << " -> " << train_part.size() << "/" << test_part.size()
           << (ok ? " shared" : " MISMATCH") << "; ";
  }
  o.detail = detail.str() + "one graph object across both parts";
  return o;
}

// 5. Learnability on the diffusion dataset.

Outcome learnability() {
  const auto start = Clock::now();
  const TemporalSignal signal = synthetic_diffusion_dataset(64, 4, 0.1, 120, 4, 0);
  cli::TrainRun run;
  run.dataset = "synthetic_diffusion_dataset(64, 4, 0.1, 120, 4, 0)";
  run.model = ModelKind::dcrnn;
  run.filters = 32;
  run.lr = 0.01;
  run.epochs = 200;
  run.regime = Regime::cumulative;
  run.seed = 0;
  run.timing = false;
  const cli::TrainOutcome outcome = cli::run_training(run, signal);

  const auto [train_part, test_part] = temporal_signal_split(signal, run.train_ratio);
  double mean = 0.0, sq = 0.0;
  std::size_t count = 0;
  for (const Snapshot& snap : test_part) {
    for (double v : snap.y->values()) {
      mean += v;
      ++count;
    }
  }
  mean /= static_cast<double>(count);
  for (const Snapshot& snap : test_part) {
    for (double v : snap.y->values()) sq += (v - mean) * (v - mean);
  }
  const double baseline = sq / static_cast<double>(count);
  const double ratio = outcome.report.test_mse / baseline;
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = ratio <= 0.2 && elapsed < 120.0;
  o.detail = "test MSE " + format("%.3e", outcome.report.test_mse) + ", constant-mean MSE " +
             format("%.3e", baseline) + ", ratio " + format("%.3f (need <= 0.2)", ratio) + ", " +
             format("%.1f s", elapsed);
  return o;
}

// 6. Cumulative epochs are no slower than incremental ones; time grows with n.

Outcome runtime_direction() {
  const auto start = Clock::now();
  cli::BenchmarkRun run;
  run.nodes = {64, 128, 256};
  run.k = 32;
  run.features = 32;
  run.snapshots = 100;
  run.repeats = 10;
  const auto cells = cli::run_benchmark(run);

  auto mean_of = [&](std::size_t n, Regime r) {
    for (const auto& c : cells) {
      if (c.nodes == n && c.regime == r) return c.mean;
    }
    return std::nan("");
  };
  Outcome o;
  std::ostringstream detail;
  double prev_inc = 0.0, prev_cum = 0.0;
  for (std::size_t n : run.nodes) {
    const double inc = mean_of(n, Regime::incremental), cum = mean_of(n, Regime::cumulative);
    const bool ok = cum <= inc && inc >= prev_inc && cum >= prev_cum;
    o.pass = o.pass && ok;
    detail << "n=" << n << format(" cum %.4f s / inc %.4f s", cum, inc) << (ok ? "" : " VIOLATION") << "; ";
    prev_inc = inc;
    prev_cum = cum;
  }
  const double elapsed = seconds_since(start);
  o.pass = o.pass && elapsed < 600.0;
  o.detail = detail.str() + format("%.1f s", elapsed);
  return o;
}

// 7. Determinism and round trips.

Outcome determinism() {
  Outcome o;
  std::vector<std::string> failures;
  const TemporalSignal signal = synthetic_diffusion_dataset(16, 2, 0.1, 20, 3, 5);

  cli::TrainRun run;
  run.dataset = "synthetic";
  run.model = ModelKind::gconv_lstm;
  run.filters = 8;
  run.epochs = 5;
  run.seed = 42;
  run.timing = false;
  const auto a = cli::run_training(run, signal);
  const auto b = cli::run_training(run, signal);
  const std::string report_a = report_to_string(a.report);
  if (report_a != report_to_string(b.report)) failures.push_back("reports differ for identical seeds");
  run.seed = 43;
  if (report_a == report_to_string(cli::run_training(run, signal).report)) {
    failures.push_back("seed has no effect on the report");
  }

  const RecurrentGCN restored = checkpoint_from_string(checkpoint_to_string(a.model));
  const auto [train_part, test_part] = temporal_signal_split(signal, run.train_ratio);
  if (evaluate_mse(restored, test_part) != a.report.test_mse) {
    failures.push_back("restored checkpoint changes the evaluation MSE");
  }

  std::vector<TemporalSignal> datasets{signal,
                                       synthetic_benchmark_sequence({.n = 24, .k = 4, .d = 3, .steps = 6})};
  {
    Rng rng(8);
    std::vector<GraphPtr> graphs;
    std::vector<Matrix> targets;
    for (int t = 0; t < 5; ++t) {
      graphs.push_back(std::make_shared<const Graph>(random_graph(7, 0.3, rng)));
      targets.push_back(random_matrix(7, 1, rng, 1e-3));
    }
    datasets.push_back(TemporalSignal::dynamic_graph_static_signal(graphs, random_matrix(7, 2, rng, 1e6), targets));
  }
  for (const TemporalSignal& s : datasets) {
    const std::string first = serialize_dataset(s, {"round-trip", "", 0});
    const Dataset loaded = parse_dataset(first);
    if (serialize_dataset(loaded.signal, loaded.metadata) != first) {
      failures.push_back("dataset round trip not byte-stable for " + to_string(s.variant()));
    }
  }

  o.pass = failures.empty();
  if (o.pass) {
    o.detail = "byte-identical reports, 3 variants byte-stable, checkpoint MSE " + format("%.6g", a.report.test_mse) +
               " reproduced exactly";
  } else {
    for (const auto& f : failures) o.detail += f + "; ";
  }
  return o;
}

// 8. Randomly assembled signals either satisfy every snapshot invariant or are
// rejected at construction.

std::string invariant_violation(const TemporalSignal& s) {
  const std::size_t n = s.num_nodes();
  if (s.size() == 0) return "empty signal";
  std::size_t index = 0;
  for (const Snapshot& snap : s) {
    const Snapshot& direct = s.at(index);
    if (snap.x != direct.x || snap.graph != direct.graph) return "iteration disagrees with indexing";
    if (snap.graph->num_nodes() != n || snap.x->rows() != n || snap.y->rows() != n) return "|V| changes over time";
    if (snap.y->cols() != 1 || snap.x->cols() != s.num_features()) return "inconsistent widths";
    if (snap.mask && snap.mask->size() != n) return "mask length";
    if (s.variant() == SignalVariant::dynamic_graph_static_signal && snap.x != s[0].x) return "features not shared";
    if (s.variant() == SignalVariant::static_graph_temporal_signal && snap.graph != s[0].graph) {
      return "graph not shared";
    }
    ++index;
  }
  return index == s.size() ? "" : "iteration length";
}

// Independent statement of what a well-formed set of components looks like.
bool components_valid(SignalVariant variant, const SignalComponents& c) {
  const std::size_t steps = c.targets.size();
  if (steps == 0) return false;
  const bool one_graph = variant == SignalVariant::static_graph_temporal_signal;
  const bool one_x = variant == SignalVariant::dynamic_graph_static_signal;
  if (c.graphs.size() != (one_graph ? 1 : steps) || c.features.size() != (one_x ? 1 : steps)) return false;
  if (!c.masks.empty() && c.masks.size() != steps) return false;
  const std::size_t n = c.targets[0]->rows();
  for (const auto& g : c.graphs) {
    if (!g || g->num_nodes() != n) return false;
  }
  for (const auto& x : c.features) {
    if (x->rows() != n || x->cols() != c.features[0]->cols() || !x->all_finite()) return false;
  }
  for (const auto& y : c.targets) {
    if (y->rows() != n || y->cols() != 1 || !y->all_finite()) return false;
  }
  for (const auto& m : c.masks) {
    if (m && m->size() != n) return false;
  }
  return true;
}

Outcome definitional_invariants() {
  Rng rng(8080);
  std::size_t built = 0, rejected = 0, rounds = 0;
  std::string violation;
  const SignalVariant variants[3] = {SignalVariant::dynamic_graph_temporal_signal,
                                     SignalVariant::dynamic_graph_static_signal,
                                     SignalVariant::static_graph_temporal_signal};
  std::bernoulli_distribution coin(0.04), with_masks(0.3);

  for (; rounds < 4000 && violation.empty(); ++rounds) {
    const SignalVariant variant = variants[rounds % 3];
    const std::size_t steps = pick(rng, 0, 6), n = pick(rng, 1, 6), d = pick(rng, 1, 3);
    const bool one_graph = variant == SignalVariant::static_graph_temporal_signal;
    const bool one_x = variant == SignalVariant::dynamic_graph_static_signal;
    auto size = [&](std::size_t good) { return coin(rng) ? good + pick(rng, 1, 2) : good; };
    auto count = [&](std::size_t good) { return coin(rng) && good > 0 ? good - 1 : size(good); };

    SignalComponents c;
    for (std::size_t i = 0, m = one_graph ? 1 : count(steps); i < m; ++i) {
      c.graphs.push_back(coin(rng) ? nullptr : std::make_shared<const Graph>(random_graph(size(n), 0.4, rng)));
    }
    for (std::size_t i = 0, m = one_x ? 1 : count(steps); i < m; ++i) {
      c.features.push_back(std::make_shared<const Matrix>(random_matrix(size(n), size(d), rng)));
    }
    for (std::size_t i = 0; i < steps; ++i) {
      Matrix y = random_matrix(size(n), size(1), rng);
      if (coin(rng)) y(0, 0) = std::nan("");
      c.targets.push_back(std::make_shared<const Matrix>(std::move(y)));
    }
    if (with_masks(rng)) {
      for (std::size_t i = 0, m = count(steps); i < m; ++i) {
        c.masks.push_back(coin(rng) ? nullptr : std::make_shared<const std::vector<bool>>(size(n), true));
      }
    }
    const bool valid = components_valid(variant, c);

    try {
      const TemporalSignal s = TemporalSignal::build(variant, c);
      ++built;
      violation = valid ? invariant_violation(s) : "malformed components were accepted";
      if (violation.empty() && s.size() >= 2) {
        const auto [a, b] = temporal_signal_split(s, 0.5);
        violation = invariant_violation(a);
        if (violation.empty()) violation = invariant_violation(b);
        if (violation.empty() && a.storage_identity() != s.storage_identity()) violation = "split copied storage";
      }
    } catch (const DataError& e) {
      ++rejected;
      if (valid) violation = std::string("well-formed components were rejected: ") + e.what();
    } catch (const std::exception& e) {
      violation = std::string("unexpected exception: ") + e.what();
    }
    if (!violation.empty()) violation = to_string(variant) + ": " + violation;
  }

  // Mutated dataset documents through the loader.
  std::size_t loaded_docs = 0;
  const std::string seed_doc = serialize_dataset(synthetic_benchmark_sequence({.n = 5, .k = 2, .d = 2, .steps = 3}));
  for (int round = 0; round < 1500 && violation.empty(); ++round) {
    std::string text = seed_doc;
    for (std::size_t e = 0, edits = pick(rng, 1, 3); e < edits; ++e) {
      text[pick(rng, 0, text.size() - 1)] = "{}[],:\"0123456789-e. "[pick(rng, 0, 20)];
    }
    try {
      const Dataset d = parse_dataset(text);
      violation = invariant_violation(d.signal);
      ++loaded_docs;
    } catch (const DataError&) {
    } catch (const std::exception& e) {
      violation = std::string("loader threw a non-dataset error: ") + e.what();
    }
  }

  Outcome o;
  o.pass = violation.empty() && built > 0 && rejected > 0;
  o.detail = std::to_string(rounds) + " assembled signals (" + std::to_string(built) + " valid, " +
             std::to_string(rejected) + " rejected), " + std::to_string(loaded_docs) +
             " mutated documents loaded" + (violation.empty() ? "" : "; violation: " + violation);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria for the tgnn library", "tgnn_acceptance"};
  std::vector<int> only;
  app.add_option("--only", only, "Run only these criteria (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "gradient fidelity", gradient_fidelity},
      {2, "sparse operators match dense oracles", oracle_equivalence},
      {3, "optimizer step counts per regime", step_law},
      {4, "train/test split arithmetic", split_arithmetic},
      {5, "learnability on synthetic diffusion", learnability},
      {6, "runtime direction of the regimes", runtime_direction},
      {7, "determinism and round trips", determinism},
      {8, "signal invariants under fuzzing", definitional_invariants},
  };

  bool all = true;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << o.detail
              << std::endl;
  }
  return all ? 0 : 1;
}
