#include "tgnn/train/adam.hpp"

#include <cmath>

#include "tgnn/errors.hpp"
#include "tgnn/kernels/kernels.hpp"

namespace tgnn {

Adam::Adam(ParameterStore& params, AdamOptions options) : params_(params), options_(options) {
  if (!(options_.lr >= 0.0) || !std::isfinite(options_.lr)) {
    throw ConfigError("learning rate must be finite and nonnegative");
  }
  if (!(options_.beta1 >= 0.0 && options_.beta1 < 1.0) ||
      !(options_.beta2 >= 0.0 && options_.beta2 < 1.0)) {
    throw ConfigError("Adam betas must be in [0, 1)");
  }
  if (!(options_.eps > 0.0)) throw ConfigError("Adam eps must be positive");
  for (const Parameter& p : params_) {
    m_.emplace_back(p.value.shape());
    v_.emplace_back(p.value.shape());
  }
}

void Adam::step() {
  if (params_.size() != m_.size()) throw Error("parameter store changed after Adam was created");
  for (const Parameter& p : params_) {
    if (!p.has_grad) throw Error("parameter '" + p.name + "' has no gradient");
  }
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double bc1 = 1.0 - std::pow(options_.beta1, t);
  const double bc2 = 1.0 - std::pow(options_.beta2, t);
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = params_[i];
    k.adam_update(p.value.size(), p.value.data(), p.grad.data(), m_[i].data(), v_[i].data(),
                  options_.lr, options_.beta1, options_.beta2, options_.eps, bc1, bc2);
  }
}

void Adam::zero_grad() { params_.zero_grad(); }

}  // namespace tgnn
