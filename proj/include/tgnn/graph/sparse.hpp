#pragma once

// Precomputed sparse graph operators and the sparse-dense product that every
// graph convolution is built on.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "tgnn/autodiff/matrix.hpp"
#include "tgnn/autodiff/tensor.hpp"
#include "tgnn/graph/graph.hpp"

namespace tgnn {

enum class OperatorKind { identity, sym_norm_adjacency, scaled_laplacian, rw_out, rw_in };

std::string to_string(OperatorKind kind);

struct Triplet {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double value = 0.0;
};

// Square |V| x |V| operator held in CSR form together with its transpose.
// Copies share storage.
class SparseOperator {
 public:
  // Duplicate (row, col) entries are summed; explicit zeros are dropped.
  SparseOperator(OperatorKind kind, std::size_t num_nodes, std::vector<Triplet> entries);

  static SparseOperator identity(std::size_t num_nodes);

  OperatorKind kind() const { return kind_; }
  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t nnz() const;

  // Coordinate view, row-major order.
  std::vector<Triplet> entries() const;
  Matrix to_dense() const;
  SparseOperator transposed() const;

  // y[n x d] = S * x[n x d]
  void apply(const double* x, std::size_t d, double* y) const;
  // y[n x d] += S^T * x[n x d]
  void apply_transpose_accumulate(const double* x, std::size_t d, double* y) const;

 private:
  struct Csr {
    std::vector<std::uint32_t> row_ptr;
    std::vector<std::uint32_t> col_idx;
    std::vector<double> values;
  };
  SparseOperator(OperatorKind kind, std::size_t n, std::shared_ptr<const Csr> fwd,
                 std::shared_ptr<const Csr> bwd)
      : kind_(kind), num_nodes_(n), forward_(std::move(fwd)), transpose_(std::move(bwd)) {}

  static std::shared_ptr<const Csr> build_csr(std::size_t n, std::vector<Triplet>& entries);

  OperatorKind kind_;
  std::size_t num_nodes_;
  std::shared_ptr<const Csr> forward_;
  std::shared_ptr<const Csr> transpose_;
};

// Sparse-dense product; gradient flows to x only.
Tensor spmm(const SparseOperator& op, const Tensor& x);

// D^-1/2 (A + sI) D^-1/2 with s = 1 when add_self_loops. Degrees are row sums
// of the (self-looped) weighted adjacency; zero-degree nodes get empty rows.
SparseOperator sym_norm_adjacency(const Graph& graph, bool add_self_loops);

// Largest-eigenvalue policy for the scaled Laplacian.
class LambdaMax {
 public:
  static LambdaMax fixed(double value);
  static LambdaMax exact() { return LambdaMax(0.0, true); }

  bool is_exact() const { return exact_; }
  double value() const { return value_; }
  std::string to_string() const;
  // "exact" or a positive number.
  static LambdaMax parse(const std::string& text);

  bool operator==(const LambdaMax&) const = default;

 private:
  LambdaMax(double value, bool exact) : value_(value), exact_(exact) {}
  double value_;
  bool exact_;
};

// Largest eigenvalue of the symmetrically normalized Laplacian by power
// iteration: at most 200 iterations, stopping early on relative change < 1e-8.
double estimate_lambda_max(const Graph& graph);

// 2 L / lambda_max - I with L = I - D^-1/2 W D^-1/2, W symmetrized as (W + W^T) / 2.
SparseOperator scaled_laplacian(const Graph& graph, LambdaMax lambda_max);

struct RandomWalkPair {
  SparseOperator out;  // D_out^-1 W
  SparseOperator in;   // D_in^-1 W^T
};

RandomWalkPair random_walk_matrices(const Graph& graph);

// Operators keyed by (graph identity, kind, lambda_max), built once and shared.
// Entries for graphs that no longer exist are purged on insertion. Safe for
// concurrent use.
class OperatorCache {
 public:
  // kind must not be identity. sym_norm_adjacency is built with self loops.
  SparseOperator get(const GraphPtr& graph, OperatorKind kind,
                     LambdaMax lambda_max = LambdaMax::fixed(2.0));

  std::size_t size() const;
  void clear();

 private:
  struct Key {
    std::uint64_t graph_id;
    OperatorKind kind;
    bool exact;
    double lambda;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  struct Entry {
    std::weak_ptr<const Graph> graph;
    SparseOperator op;
  };

  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, Entry, KeyHash> entries_;
};

}  // namespace tgnn
