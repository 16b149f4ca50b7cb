#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "tgnn/autodiff/tensor.hpp"
#include "tgnn/random.hpp"

namespace tgnn {

// Owns a model's parameters in creation order. Addresses stay valid for the
// store's lifetime, so layers and the tape can hold Parameter pointers.
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;

  // Throws ConfigError on a duplicate name.
  Parameter& add(std::string name, Matrix value);

  std::size_t size() const { return params_.size(); }
  Parameter& operator[](std::size_t i) { return params_[i]; }
  const Parameter& operator[](std::size_t i) const { return params_[i]; }
  Parameter* find(const std::string& name);
  const Parameter* find(const std::string& name) const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  std::size_t num_values() const;
  void zero_grad();

 private:
  std::deque<Parameter> params_;
};

// U(-a, a) with a = sqrt(6 / (rows + cols)).
Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace tgnn
