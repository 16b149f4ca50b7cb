#pragma once

#include <cstddef>
#include <cstdint>

#include "tgnn/signal/temporal_signal.hpp"

namespace tgnn {

// Static Watts-Strogatz graph with P = D_out^-1 W. X_0 ~ N(0, 1) per entry,
// and for every t: y_t = row mean of P X_t, X_{t+1} = P X_t + N(0, noise_std^2).
// Snapshot t carries (X_t, y_t).
TemporalSignal synthetic_diffusion_dataset(std::size_t n, std::size_t k, double p,
                                           std::size_t steps, std::size_t d, std::uint64_t seed,
                                           double noise_std = 0.01);

struct BenchmarkSequenceOptions {
  std::size_t n = 1024;
  std::size_t k = 32;  // edges per node
  std::size_t d = 32;
  std::size_t steps = 100;
  double p = 0.1;
  std::uint64_t seed = 0;
};

// steps independent Watts-Strogatz graphs, U(0, 1) features and Bernoulli(0.5)
// targets in {0, 1}.
TemporalSignal synthetic_benchmark_sequence(const BenchmarkSequenceOptions& options);

}  // namespace tgnn
