#include "tgnn/data/synthetic.hpp"

#include "tgnn/errors.hpp"
#include "tgnn/graph/sparse.hpp"

namespace tgnn {

TemporalSignal synthetic_diffusion_dataset(std::size_t n, std::size_t k, double p,
                                           std::size_t steps, std::size_t d, std::uint64_t seed,
                                           double noise_std) {
  if (steps == 0) throw ConfigError("synthetic dataset needs at least one snapshot");
  if (d == 0) throw ConfigError("synthetic dataset needs at least one feature");
  if (!(noise_std >= 0.0)) throw ConfigError("noise_std must be nonnegative");

  Rng rng(seed);
  auto graph = std::make_shared<const Graph>(watts_strogatz(n, k, p, rng));
  const SparseOperator walk = random_walk_matrices(*graph).out;

  std::normal_distribution<double> standard(0.0, 1.0);
  Matrix x(n, d);
  for (double& v : x.values()) v = standard(rng);

  std::vector<Matrix> features;
  std::vector<Matrix> targets;
  features.reserve(steps);
  targets.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    Matrix diffused(n, d);
    walk.apply(x.data(), d, diffused.data());
    Matrix y(n, 1);
    for (std::size_t v = 0; v < n; ++v) {
      double total = 0.0;
      for (double value : diffused.row(v)) total += value;
      y(v, 0) = total / static_cast<double>(d);
    }
    if (noise_std > 0.0) {
      std::normal_distribution<double> noise(0.0, noise_std);
      for (double& value : diffused.values()) value += noise(rng);
    }
    features.push_back(std::move(x));
    targets.push_back(std::move(y));
    x = std::move(diffused);
  }
  return TemporalSignal::static_graph(std::move(graph), std::move(features), std::move(targets));
}

TemporalSignal synthetic_benchmark_sequence(const BenchmarkSequenceOptions& o) {
  if (o.steps == 0) throw ConfigError("benchmark sequence needs at least one snapshot");
  if (o.d == 0) throw ConfigError("benchmark sequence needs at least one feature");

  Rng rng(o.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<GraphPtr> graphs;
  std::vector<Matrix> features;
  std::vector<Matrix> targets;
  for (std::size_t t = 0; t < o.steps; ++t) {
    graphs.push_back(std::make_shared<const Graph>(watts_strogatz(o.n, o.k, o.p, rng)));
    Matrix x(o.n, o.d);
    for (double& v : x.values()) v = uniform(rng);
    Matrix y(o.n, 1);
    for (double& v : y.values()) v = coin(rng) ? 1.0 : 0.0;
    features.push_back(std::move(x));
    targets.push_back(std::move(y));
  }
  return TemporalSignal::dynamic_graph(std::move(graphs), std::move(features), std::move(targets));
}

}  // namespace tgnn
