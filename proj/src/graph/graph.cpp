#include "tgnn/graph/graph.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <string>

#include "tgnn/errors.hpp"

namespace tgnn {
namespace {

std::uint64_t next_graph_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

Graph::Graph(std::size_t num_nodes, std::vector<Edge> edges, std::vector<double> weights)
    : num_nodes_(num_nodes), edges_(std::move(edges)), weights_(std::move(weights)),
      id_(next_graph_id()) {
  if (num_nodes_ == 0) throw DataError("graph must have at least one node");
  if (weights_.empty()) {
    weights_.assign(edges_.size(), 1.0);
  } else if (weights_.size() != edges_.size()) {
    throw DataError("graph has " + std::to_string(edges_.size()) + " edges but " +
                    std::to_string(weights_.size()) + " weights");
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].source >= num_nodes_ || edges_[e].target >= num_nodes_) {
      throw DataError("edge " + std::to_string(e) + " (" + std::to_string(edges_[e].source) +
                      " -> " + std::to_string(edges_[e].target) + ") references a node >= " +
                      std::to_string(num_nodes_));
    }
    if (!(weights_[e] >= 0.0) || !std::isfinite(weights_[e])) {
      throw DataError("edge " + std::to_string(e) + " has invalid weight " +
                      std::to_string(weights_[e]));
    }
  }
}

bool Graph::same_structure(const Graph& other) const {
  return num_nodes_ == other.num_nodes_ && edges_ == other.edges_ && weights_ == other.weights_;
}

std::vector<std::size_t> out_degrees(const Graph& graph) {
  std::vector<std::size_t> degree(graph.num_nodes(), 0);
  for (const Edge& e : graph.edges()) ++degree[e.source];
  return degree;
}

Graph watts_strogatz(std::size_t n, std::size_t k, double p, Rng& rng) {
  if (n == 0) throw ConfigError("watts_strogatz: n must be positive");
  if (k % 2 != 0) throw ConfigError("watts_strogatz: k must be even, got " + std::to_string(k));
  if (k >= n) {
    throw ConfigError("watts_strogatz: k must be < n, got k=" + std::to_string(k) +
                      " n=" + std::to_string(n));
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("watts_strogatz: p must be in [0, 1], got " + std::to_string(p));
  }

  std::vector<std::set<std::uint32_t>> adjacent(n);
  const auto link = [&](std::uint32_t a, std::uint32_t b) {
    adjacent[a].insert(b);
    adjacent[b].insert(a);
  };
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (std::size_t u = 0; u < n; ++u) {
      link(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>((u + j) % n));
    }
  }

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (std::size_t ui = 0; ui < n; ++ui) {
      const auto u = static_cast<std::uint32_t>(ui);
      const auto v = static_cast<std::uint32_t>((ui + j) % n);
      if (coin(rng) >= p) continue;
      if (adjacent[u].size() >= n - 1) continue;
      std::uint32_t w = pick(rng);
      while (w == u || adjacent[u].contains(w)) w = pick(rng);
      adjacent[u].erase(v);
      adjacent[v].erase(u);
      link(u, w);
    }
  }

  std::vector<Edge> edges;
  edges.reserve(n * k);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::uint32_t v : adjacent[u]) edges.push_back({static_cast<std::uint32_t>(u), v});
  }
  return Graph(n, std::move(edges));
}

}  // namespace tgnn
