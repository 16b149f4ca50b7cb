#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "tgnn/random.hpp"

namespace tgnn {

struct Edge {
  std::uint32_t source = 0;
  std::uint32_t target = 0;

  bool operator==(const Edge&) const = default;
};

// Directed weighted edge list over a fixed node set. Undirected graphs are
// stored with both directions present. Immutable after construction.
class Graph {
 public:
  // Empty weights mean every edge has weight 1. Throws DataError on an
  // out-of-range endpoint, a weight count mismatch, or a negative/NaN weight.
  Graph(std::size_t num_nodes, std::vector<Edge> edges, std::vector<double> weights = {});

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<double>& weights() const { return weights_; }

  // Process-unique identity, used as the operator cache key.
  std::uint64_t id() const { return id_; }

  // Same edges and weights, in the same order.
  bool same_structure(const Graph& other) const;

 private:
  std::size_t num_nodes_;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  std::uint64_t id_;
};

using GraphPtr = std::shared_ptr<const Graph>;

// Ring lattice where every node links to its k nearest neighbours (k/2 on each
// side); each lattice edge then has its far endpoint rewired with probability p
// to a uniformly chosen node that is neither the source nor already adjacent.
// Every undirected edge appears as two directed unit-weight entries.
Graph watts_strogatz(std::size_t n, std::size_t k, double p, Rng& rng);

// Out-degree (number of outgoing entries) per node.
std::vector<std::size_t> out_degrees(const Graph& graph);

}  // namespace tgnn
