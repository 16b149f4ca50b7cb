#include "tgnn/graph/sparse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>

#include "tgnn/errors.hpp"
#include "tgnn/kernels/kernels.hpp"

namespace tgnn {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::identity:
      return "identity";
    case OperatorKind::sym_norm_adjacency:
      return "sym_norm_adjacency";
    case OperatorKind::scaled_laplacian:
      return "scaled_laplacian";
    case OperatorKind::rw_out:
      return "rw_out";
    case OperatorKind::rw_in:
      return "rw_in";
  }
  return "unknown";
}

std::shared_ptr<const SparseOperator::Csr> SparseOperator::build_csr(
    std::size_t n, std::vector<Triplet>& entries) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  auto csr = std::make_shared<Csr>();
  csr->row_ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    const Triplet& t = entries[i];
    double total = 0.0;
    std::size_t j = i;
    for (; j < entries.size() && entries[j].row == t.row && entries[j].col == t.col; ++j) {
      total += entries[j].value;
    }
    if (total != 0.0) {
      csr->col_idx.push_back(t.col);
      csr->values.push_back(total);
      ++csr->row_ptr[t.row + 1];
    }
    i = j;
  }
  for (std::size_t r = 0; r < n; ++r) csr->row_ptr[r + 1] += csr->row_ptr[r];
  return csr;
}

SparseOperator::SparseOperator(OperatorKind kind, std::size_t num_nodes,
                               std::vector<Triplet> entries)
    : kind_(kind), num_nodes_(num_nodes) {
  for (const Triplet& t : entries) {
    if (t.row >= num_nodes || t.col >= num_nodes) {
      throw ShapeError("operator entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                       ") outside " + std::to_string(num_nodes) + " nodes");
    }
    if (!std::isfinite(t.value)) throw NumericError("operator entry is not finite");
  }
  std::vector<Triplet> flipped;
  flipped.reserve(entries.size());
  for (const Triplet& t : entries) flipped.push_back({t.col, t.row, t.value});
  forward_ = build_csr(num_nodes, entries);
  transpose_ = build_csr(num_nodes, flipped);
}

SparseOperator SparseOperator::identity(std::size_t num_nodes) {
  std::vector<Triplet> diag;
  diag.reserve(num_nodes);
  for (std::uint32_t i = 0; i < num_nodes; ++i) diag.push_back({i, i, 1.0});
  return SparseOperator(OperatorKind::identity, num_nodes, std::move(diag));
}

std::size_t SparseOperator::nnz() const { return forward_->values.size(); }

std::vector<Triplet> SparseOperator::entries() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::uint32_t r = 0; r < num_nodes_; ++r) {
    for (std::uint32_t e = forward_->row_ptr[r]; e < forward_->row_ptr[r + 1]; ++e) {
      out.push_back({r, forward_->col_idx[e], forward_->values[e]});
    }
  }
  return out;
}

Matrix SparseOperator::to_dense() const {
  Matrix dense(num_nodes_, num_nodes_);
  for (const Triplet& t : entries()) dense(t.row, t.col) = t.value;
  return dense;
}

SparseOperator SparseOperator::transposed() const {
  return SparseOperator(kind_, num_nodes_, transpose_, forward_);
}

void SparseOperator::apply(const double* x, std::size_t d, double* y) const {
  kernels::active().csr_spmm(num_nodes_, d, forward_->row_ptr.data(), forward_->col_idx.data(),
                             forward_->values.data(), x, y, false);
}

void SparseOperator::apply_transpose_accumulate(const double* x, std::size_t d, double* y) const {
  kernels::active().csr_spmm(num_nodes_, d, transpose_->row_ptr.data(),
                             transpose_->col_idx.data(), transpose_->values.data(), x, y, true);
}

Tensor spmm(const SparseOperator& op, const Tensor& x) {
  if (op.num_nodes() != x.rows()) {
    throw ShapeError("spmm: operator over " + std::to_string(op.num_nodes()) +
                     " nodes applied to " + to_string(x.shape()));
  }
  const std::size_t d = x.cols();
  Matrix out(x.shape());
  op.apply(x.value().data(), d, out.data());
  Tape* tape = x.tracked() ? x.tape() : nullptr;
  if (tape == nullptr) return Tensor(std::move(out));
  return tape->record(std::move(out), {x}, [op, d](const Matrix& g, std::span<Matrix* const> grads) {
    op.apply_transpose_accumulate(g.data(), d, grads[0]->data());
  });
}

namespace {

std::vector<double> inverse_sqrt(const std::vector<double>& degree) {
  std::vector<double> out(degree.size(), 0.0);
  for (std::size_t i = 0; i < degree.size(); ++i) {
    if (degree[i] > 0.0) out[i] = 1.0 / std::sqrt(degree[i]);
  }
  return out;
}

// (W + W^T) / 2 as triplets.
std::vector<Triplet> symmetrized(const Graph& graph) {
  std::vector<Triplet> out;
  out.reserve(2 * graph.num_edges());
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const Edge& edge = graph.edges()[e];
    const double half = 0.5 * graph.weights()[e];
    out.push_back({edge.source, edge.target, half});
    out.push_back({edge.target, edge.source, half});
  }
  return out;
}

// Normalized adjacency D^-1/2 W D^-1/2 of the symmetrized graph as a dense-free
// triplet list; shared by the Laplacian and its eigenvalue estimate.
std::vector<Triplet> normalized_symmetric_adjacency(const Graph& graph) {
  std::vector<Triplet> w = symmetrized(graph);
  std::vector<double> degree(graph.num_nodes(), 0.0);
  for (const Triplet& t : w) degree[t.row] += t.value;
  const std::vector<double> dinv = inverse_sqrt(degree);
  for (Triplet& t : w) t.value *= dinv[t.row] * dinv[t.col];
  return w;
}

}  // namespace

SparseOperator sym_norm_adjacency(const Graph& graph, bool add_self_loops) {
  const std::size_t n = graph.num_nodes();
  std::vector<Triplet> entries;
  entries.reserve(graph.num_edges() + (add_self_loops ? n : 0));
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const Edge& edge = graph.edges()[e];
    entries.push_back({edge.source, edge.target, graph.weights()[e]});
  }
  if (add_self_loops) {
    for (std::uint32_t i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
  }
  std::vector<double> degree(n, 0.0);
  for (const Triplet& t : entries) degree[t.row] += t.value;
  const std::vector<double> dinv = inverse_sqrt(degree);
  for (Triplet& t : entries) t.value *= dinv[t.row] * dinv[t.col];
  return SparseOperator(OperatorKind::sym_norm_adjacency, n, std::move(entries));
}

LambdaMax LambdaMax::fixed(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError("lambda_max must be positive, got " + std::to_string(value));
  }
  return LambdaMax(value, false);
}

std::string LambdaMax::to_string() const {
  if (exact_) return "exact";
  std::ostringstream out;
  out.precision(17);
  out << value_;
  return out.str();
}

LambdaMax LambdaMax::parse(const std::string& text) {
  if (text == "exact") return exact();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("lambda_max must be 'exact' or a positive number, got '" + text + "'");
  }
  if (used != text.size()) {
    throw ConfigError("lambda_max must be 'exact' or a positive number, got '" + text + "'");
  }
  return fixed(v);
}

double estimate_lambda_max(const Graph& graph) {
  const std::size_t n = graph.num_nodes();
  // L = I - A_norm, so L v = v - A_norm v.
  const SparseOperator adjacency(OperatorKind::sym_norm_adjacency, n,
                                 normalized_symmetric_adjacency(graph));
  std::vector<double> v(n), lv(n);
  Rng rng(0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> init(0.5, 1.5);
  for (std::size_t i = 0; i < n; ++i) v[i] = (i % 2 == 0 ? 1.0 : -1.0) * init(rng);

  const auto normalize = [](std::vector<double>& x) {
    double norm = 0.0;
    for (double xi : x) norm += xi * xi;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& xi : x) xi /= norm;
    }
    return norm;
  };
  normalize(v);

  double estimate = 0.0;
  double residual = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    adjacency.apply(v.data(), 1, lv.data());
    double rayleigh = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lv[i] = v[i] - lv[i];
      rayleigh += v[i] * lv[i];
    }
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = lv[i] - rayleigh * v[i];
      residual += r * r;
    }
    residual = std::sqrt(residual);
    const double previous = estimate;
    estimate = rayleigh;
    if (normalize(lv) == 0.0) break;
    v.swap(lv);
    if (iter > 0 && std::abs(estimate - previous) < 1e-8 * std::abs(estimate)) break;
  }
  // The Rayleigh quotient approaches lambda_max from below; adding the
  // residual norm bounds it from above once the iterate is dominated by the
  // top eigenvector, which keeps the scaled spectrum inside [-1, 1]. The
  // normalized Laplacian never exceeds 2.
  if (estimate <= 0.0) return 1.0;
  return std::min(estimate + residual, 2.0);
}

SparseOperator scaled_laplacian(const Graph& graph, LambdaMax lambda_max) {
  const std::size_t n = graph.num_nodes();
  const double lambda = lambda_max.is_exact() ? estimate_lambda_max(graph) : lambda_max.value();
  const double c = 2.0 / lambda;
  std::vector<Triplet> entries = normalized_symmetric_adjacency(graph);
  for (Triplet& t : entries) t.value *= -c;
  for (std::uint32_t i = 0; i < n; ++i) entries.push_back({i, i, c - 1.0});
  return SparseOperator(OperatorKind::scaled_laplacian, n, std::move(entries));
}

RandomWalkPair random_walk_matrices(const Graph& graph) {
  const std::size_t n = graph.num_nodes();
  std::vector<double> out_degree(n, 0.0), in_degree(n, 0.0);
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    out_degree[graph.edges()[e].source] += graph.weights()[e];
    in_degree[graph.edges()[e].target] += graph.weights()[e];
  }
  std::vector<Triplet> forward, backward;
  forward.reserve(graph.num_edges());
  backward.reserve(graph.num_edges());
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const Edge& edge = graph.edges()[e];
    const double w = graph.weights()[e];
    if (out_degree[edge.source] > 0.0) {
      forward.push_back({edge.source, edge.target, w / out_degree[edge.source]});
    }
    if (in_degree[edge.target] > 0.0) {
      backward.push_back({edge.target, edge.source, w / in_degree[edge.target]});
    }
  }
  return {SparseOperator(OperatorKind::rw_out, n, std::move(forward)),
          SparseOperator(OperatorKind::rw_in, n, std::move(backward))};
}

std::size_t OperatorCache::KeyHash::operator()(const Key& k) const {
  std::size_t h = std::hash<std::uint64_t>{}(k.graph_id);
  h ^= std::hash<int>{}(static_cast<int>(k.kind)) + 0x9e3779b9 + (h << 6) + (h >> 2);
  h ^= std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(k.lambda)) + 0x9e3779b9 +
       (h << 6) + (h >> 2);
  return h ^ static_cast<std::size_t>(k.exact);
}

SparseOperator OperatorCache::get(const GraphPtr& graph, OperatorKind kind, LambdaMax lambda_max) {
  if (!graph) throw ConfigError("operator cache: null graph");
  if (kind == OperatorKind::identity) return SparseOperator::identity(graph->num_nodes());
  const bool uses_lambda = kind == OperatorKind::scaled_laplacian;
  const Key key{graph->id(), kind, uses_lambda && lambda_max.is_exact(),
                uses_lambda && !lambda_max.is_exact() ? lambda_max.value() : 0.0};
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second.op;
  }

  std::vector<std::pair<Key, SparseOperator>> built;
  switch (kind) {
    case OperatorKind::sym_norm_adjacency:
      built.emplace_back(key, sym_norm_adjacency(*graph, true));
      break;
    case OperatorKind::scaled_laplacian:
      built.emplace_back(key, scaled_laplacian(*graph, lambda_max));
      break;
    case OperatorKind::rw_out:
    case OperatorKind::rw_in: {
      RandomWalkPair pair = random_walk_matrices(*graph);
      built.emplace_back(Key{graph->id(), OperatorKind::rw_out, false, 0.0}, pair.out);
      built.emplace_back(Key{graph->id(), OperatorKind::rw_in, false, 0.0}, pair.in);
      break;
    }
    case OperatorKind::identity:
      break;
  }

  std::unique_lock lock(mutex_);
  std::erase_if(entries_, [](const auto& item) { return item.second.graph.expired(); });
  for (auto& [k, op] : built) entries_.try_emplace(k, Entry{graph, op});
  return entries_.at(key).op;
}

std::size_t OperatorCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void OperatorCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
}

}  // namespace tgnn
