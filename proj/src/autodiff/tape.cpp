#include <memory>

#include "tgnn/autodiff/tensor.hpp"
#include "tgnn/errors.hpp"
#include "tgnn/kernels/kernels.hpp"

namespace tgnn {

Parameter::Parameter(std::string name_, Matrix value_)
    : name(std::move(name_)), value(std::move(value_)), grad(value.shape()) {}

void Parameter::zero_grad() {
  if (grad.shape() != value.shape()) {
    grad = Matrix(value.shape());
  } else {
    grad.fill(0.0);
  }
  has_grad = false;
}

Tensor::Tensor(Matrix value) {
  if (value.rows() == 0 || value.cols() == 0) {
    throw ShapeError("tensor shape must be positive, got " + to_string(value.shape()));
  }
  if (!value.all_finite()) throw NumericError("tensor value contains NaN or infinity");
  value_ = std::make_shared<const Matrix>(std::move(value));
}

Tensor Tensor::constant(std::shared_ptr<const Matrix> value) {
  if (!value || value->rows() == 0 || value->cols() == 0) {
    throw ShapeError("tensor shape must be positive");
  }
  return Tensor(std::move(value), nullptr, kNoNode);
}

double Tensor::item() const {
  if (shape() != Shape{1, 1}) throw ShapeError("item() on non-scalar tensor " + to_string(shape()));
  return (*value_)(0, 0);
}

const Matrix* Gradients::find(const Tensor& t) const {
  if (!t.tracked()) return nullptr;
  auto it = leaf_grads_.find(t.node());
  return it == leaf_grads_.end() ? nullptr : &it->second;
}

const Matrix& Gradients::at(const Tensor& t) const {
  const Matrix* g = find(t);
  if (g == nullptr) throw Error("no gradient recorded for this tensor");
  return *g;
}

Tensor Tape::add_leaf(std::shared_ptr<const Matrix> value, Parameter* parameter) {
  const auto id = static_cast<NodeId>(nodes_.size());
  Node node;
  node.shape = value->shape();
  node.parameter = parameter;
  node.leaf = true;
  nodes_.push_back(std::move(node));
  return Tensor(std::move(value), this, id);
}

Tensor Tape::variable(Matrix value) {
  Tensor constant(std::move(value));
  if (!recording()) return constant;
  return add_leaf(constant.shared_value(), nullptr);
}

Tensor Tape::watch(Parameter& parameter) {
  if (auto it = watched_.find(&parameter); it != watched_.end()) return it->second;
  Tensor constant(parameter.value);
  Tensor t = recording() ? add_leaf(constant.shared_value(), &parameter) : constant;
  watched_.emplace(&parameter, t);
  return t;
}

Tensor Tape::record(Matrix value, std::initializer_list<Tensor> inputs, BackwardFn backward) {
  return record(std::move(value), std::span<const Tensor>(inputs.begin(), inputs.size()),
                std::move(backward));
}

Tensor Tape::record(Matrix value, std::span<const Tensor> inputs, BackwardFn backward) {
  if (!value.all_finite()) throw NumericError("operation produced NaN or infinity");
  bool any_tracked = false;
  for (const Tensor& in : inputs) {
    if (!in.tracked()) continue;
    if (in.tape() != this) throw Error("operands are tracked on different tapes");
    any_tracked = true;
  }
  if (!any_tracked || !recording()) return Tensor(std::move(value));

  Node node;
  node.inputs.reserve(inputs.size());
  for (const Tensor& in : inputs) node.inputs.push_back(in.tracked() ? in.node() : kNoNode);
  node.backward = std::move(backward);
  node.shape = value.shape();
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(node));
  return Tensor(std::make_shared<const Matrix>(std::move(value)), this, id);
}

Gradients Tape::backward(const Tensor& root) {
  if (!root.tracked() || root.tape() != this) {
    throw Error("backward root is not tracked on this tape");
  }
  if (root.shape() != Shape{1, 1}) {
    throw ShapeError("backward root must be scalar, got " + to_string(root.shape()));
  }

  const auto& k = kernels::active();
  Gradients out;
  std::vector<std::unique_ptr<Matrix>> grads(static_cast<std::size_t>(root.node()) + 1);
  grads[root.node()] = std::make_unique<Matrix>(1, 1, 1.0);
  std::vector<Matrix*> slots;

  for (std::size_t i = grads.size(); i-- > 0;) {
    if (!grads[i]) continue;
    Node& node = nodes_[i];
    if (node.leaf) {
      if (Parameter* p = node.parameter) {
        if (p->grad.shape() != p->value.shape()) p->grad = Matrix(p->value.shape());
        k.accumulate(p->grad.size(), grads[i]->data(), p->grad.data());
        p->has_grad = true;
      }
      out.leaf_grads_.emplace(static_cast<NodeId>(i), std::move(*grads[i]));
      grads[i].reset();
      continue;
    }
    slots.assign(node.inputs.size(), nullptr);
    for (std::size_t j = 0; j < node.inputs.size(); ++j) {
      const NodeId in = node.inputs[j];
      if (in == kNoNode) continue;
      if (!grads[in]) grads[in] = std::make_unique<Matrix>(nodes_[in].shape);
      slots[j] = grads[in].get();
    }
    node.backward(*grads[i], slots);
    grads[i].reset();
  }
  return out;
}

}  // namespace tgnn
