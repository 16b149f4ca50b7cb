#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tgnn/nn/parameters.hpp"

namespace tgnn {

struct AdamOptions {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction over every parameter of a store. Moment buffers
// are created for the parameters present at construction.
class Adam {
 public:
  Adam(ParameterStore& params, AdamOptions options);

  // Applies one update from the accumulated gradients. Throws Error when some
  // parameter received no gradient since the last zero_grad().
  void step();
  void zero_grad();

  std::uint64_t steps() const { return steps_; }
  const AdamOptions& options() const { return options_; }
  const Matrix& first_moment(std::size_t i) const { return m_.at(i); }
  const Matrix& second_moment(std::size_t i) const { return v_.at(i); }

 private:
  ParameterStore& params_;
  AdamOptions options_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::uint64_t steps_ = 0;
};

}  // namespace tgnn
