#pragma once

// Reverse-mode automatic differentiation over dense matrices.
//
// A Tape records, in execution order, every operation whose inputs include a
// tracked tensor. Tensors are cheap handles: a shared immutable value plus an
// optional node id on the tape that produced them. Constants carry no node.
//
// Gradients of trainable Parameters accumulate across backward calls until
// Parameter::zero_grad(); this is what lets a training loop sum losses from
// many forward passes before a single update.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tgnn/autodiff/matrix.hpp"

namespace tgnn {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

class Tape;

// A trainable matrix with its gradient buffer.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  bool has_grad = false;

  Parameter(std::string name, Matrix value);

  void zero_grad();
};

class Tensor {
 public:
  Tensor() = default;
  // Untracked constant.
  explicit Tensor(Matrix value);
  // Untracked constant sharing an existing value.
  static Tensor constant(std::shared_ptr<const Matrix> value);

  const Matrix& value() const { return *value_; }
  std::shared_ptr<const Matrix> shared_value() const { return value_; }
  Shape shape() const { return value_->shape(); }
  std::size_t rows() const { return value_->rows(); }
  std::size_t cols() const { return value_->cols(); }
  bool defined() const { return value_ != nullptr; }

  bool tracked() const { return node_ != kNoNode; }
  NodeId node() const { return node_; }
  Tape* tape() const { return tape_; }

  // Value of a 1x1 tensor.
  double item() const;

 private:
  friend class Tape;
  Tensor(std::shared_ptr<const Matrix> value, Tape* tape, NodeId node)
      : value_(std::move(value)), tape_(tape), node_(node) {}

  std::shared_ptr<const Matrix> value_;
  Tape* tape_ = nullptr;
  NodeId node_ = kNoNode;
};

// Adds the input gradients of one recorded operation. grads[i] is null when
// input i is a constant; otherwise the callee must += into it.
using BackwardFn = std::function<void(const Matrix& grad_out, std::span<Matrix* const> grads)>;

// Gradients of the leaves reached by one backward sweep.
class Gradients {
 public:
  // Null when the tensor is not a leaf reached from the root.
  const Matrix* find(const Tensor& t) const;
  const Matrix& at(const Tensor& t) const;
  std::size_t size() const { return leaf_grads_.size(); }

 private:
  friend class Tape;
  std::unordered_map<NodeId, Matrix> leaf_grads_;
};

class Tape {
 public:
  enum class Mode { training, inference };

  explicit Tape(Mode mode = Mode::training) : mode_(mode) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return mode_ == Mode::training; }

  // Differentiable leaf that is not a model parameter (inputs in gradient checks).
  Tensor variable(Matrix value);

  // Leaf bound to a parameter; backward adds into parameter.grad. Watching the
  // same parameter twice on one tape returns the same node. In inference mode
  // the result is a constant.
  Tensor watch(Parameter& parameter);

  // Appends an operation node. Returns a constant when no input is tracked or
  // the tape is not recording. Throws NumericError if value is not finite.
  Tensor record(Matrix value, std::initializer_list<Tensor> inputs, BackwardFn backward);
  Tensor record(Matrix value, std::span<const Tensor> inputs, BackwardFn backward);

  // Reverse sweep from a tracked 1x1 root. Leaf gradients are returned and
  // parameter gradients accumulated. The tape itself is not consumed.
  Gradients backward(const Tensor& root);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    std::vector<NodeId> inputs;  // kNoNode marks a constant input
    BackwardFn backward;
    Shape shape;
    Parameter* parameter = nullptr;
    bool leaf = false;
  };

  Tensor add_leaf(std::shared_ptr<const Matrix> value, Parameter* parameter);

  Mode mode_;
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, Tensor> watched_;
};

}  // namespace tgnn
