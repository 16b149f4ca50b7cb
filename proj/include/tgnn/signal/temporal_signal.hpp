#pragma once

// Discrete-time spatiotemporal signals over a fixed node set.
//
// Three storage variants keep only what actually changes over time:
//   static_graph_temporal_signal   one graph,  T feature matrices, T targets
//   dynamic_graph_static_signal    T graphs,   one feature matrix, T targets
//   dynamic_graph_temporal_signal  T graphs,   T feature matrices, T targets
// Snapshots are views: they hold shared pointers into the stored arrays, so
// iterating, indexing, and splitting never copy graphs or matrices.

#include <cstddef>
#include <iterator>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tgnn/autodiff/matrix.hpp"
#include "tgnn/graph/graph.hpp"

namespace tgnn {

enum class SignalVariant {
  dynamic_graph_temporal_signal,
  dynamic_graph_static_signal,
  static_graph_temporal_signal,
};

std::string to_string(SignalVariant variant);
SignalVariant parse_signal_variant(const std::string& text);

using MatrixPtr = std::shared_ptr<const Matrix>;
using MaskPtr = std::shared_ptr<const std::vector<bool>>;

struct Snapshot {
  GraphPtr graph;
  MatrixPtr x;  // [|V| x d]
  MatrixPtr y;  // [|V| x 1]
  MaskPtr mask;  // nodes that count toward the loss; null means all
  std::size_t t = 0;  // position in the original, unsplit sequence

  std::size_t num_nodes() const { return graph->num_nodes(); }
  std::size_t num_features() const { return x->cols(); }
};

struct SignalComponents {
  std::vector<GraphPtr> graphs;
  std::vector<MatrixPtr> features;
  std::vector<MatrixPtr> targets;
  std::vector<MaskPtr> masks;  // empty, or one per time step
};

class TemporalSignal {
 public:
  // Validates counts and shapes for the variant. Errors name the offending
  // time index.
  static TemporalSignal build(SignalVariant variant, SignalComponents components);

  static TemporalSignal static_graph(GraphPtr graph, std::vector<Matrix> features,
                                     std::vector<Matrix> targets);
  static TemporalSignal dynamic_graph_static_signal(std::vector<GraphPtr> graphs, Matrix features,
                                                    std::vector<Matrix> targets);
  static TemporalSignal dynamic_graph(std::vector<GraphPtr> graphs, std::vector<Matrix> features,
                                      std::vector<Matrix> targets);

  SignalVariant variant() const { return storage_->variant; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::size_t num_nodes() const { return storage_->num_nodes; }
  std::size_t num_features() const { return storage_->num_features; }

  // Throws RangeError unless i < size().
  Snapshot at(std::size_t i) const;
  Snapshot operator[](std::size_t i) const { return at(i); }

  // Window [begin, begin + count) of the same storage.
  TemporalSignal slice(std::size_t begin, std::size_t count) const;

  // Storage this signal views; two signals from one split share it.
  const void* storage_identity() const { return storage_.get(); }

  class Iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Snapshot;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = Snapshot;

    Iterator() = default;
    Snapshot operator*() const { return signal_->at(index_); }
    Iterator& operator++() {
      ++index_;
      return *this;
    }
    Iterator operator++(int) {
      Iterator copy = *this;
      ++index_;
      return copy;
    }
    bool operator==(const Iterator& other) const { return index_ == other.index_; }

   private:
    friend class TemporalSignal;
    Iterator(const TemporalSignal* signal, std::size_t index) : signal_(signal), index_(index) {}
    const TemporalSignal* signal_ = nullptr;
    std::size_t index_ = 0;
  };

  Iterator begin() const { return Iterator(this, 0); }
  Iterator end() const { return Iterator(this, count_); }

 private:
  struct Storage {
    SignalVariant variant;
    std::size_t num_nodes;
    std::size_t num_features;
    SignalComponents components;
  };

  TemporalSignal(std::shared_ptr<const Storage> storage, std::size_t begin, std::size_t count)
      : storage_(std::move(storage)), begin_(begin), count_(count) {}

  std::shared_ptr<const Storage> storage_;
  std::size_t begin_ = 0;
  std::size_t count_ = 0;
};

// Train gets the first floor(train_ratio * T) snapshots, test the rest. Both
// keep the variant and view the original storage. Throws ConfigError for a
// ratio outside (0, 1) or when either side would be empty.
std::pair<TemporalSignal, TemporalSignal> temporal_signal_split(const TemporalSignal& signal,
                                                                double train_ratio);

}  // namespace tgnn
