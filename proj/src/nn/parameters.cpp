#include "tgnn/nn/parameters.hpp"

#include <cmath>

#include "tgnn/errors.hpp"

namespace tgnn {

Parameter& ParameterStore::add(std::string name, Matrix value) {
  if (find(name) != nullptr) throw ConfigError("duplicate parameter name '" + name + "'");
  return params_.emplace_back(std::move(name), std::move(value));
}

Parameter* ParameterStore::find(const std::string& name) {
  for (Parameter& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const Parameter* ParameterStore::find(const std::string& name) const {
  for (const Parameter& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::size_t ParameterStore::num_values() const {
  std::size_t total = 0;
  for (const Parameter& p : params_) total += p.value.size();
  return total;
}

void ParameterStore::zero_grad() {
  for (Parameter& p : params_) p.zero_grad();
}

Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-a, a);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = dist(rng);
  return m;
}

}  // namespace tgnn
