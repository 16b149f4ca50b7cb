#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tgnn/graph/sparse.hpp"

namespace tgnn {

enum class ModelKind { gconv_gru, gconv_lstm, dcrnn };

// CLI spelling: gconv-gru, gconv-lstm, dcrnn.
std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

using HyperValue = std::variant<std::int64_t, double, std::string>;
// Name -> value in a fixed order.
using Hyperparameters = std::vector<std::pair<std::string, HyperValue>>;

std::string to_string(const HyperValue& value);

// Hyperparameters of a recurrent graph convolutional model. There is no
// default constructor and no defaulted field: every value must be chosen by
// the caller.
//
// k is the Chebyshev filter size (number of polynomial terms, >= 1) for
// gconv-gru / gconv-lstm, and the diffusion order (highest random-walk power,
// >= 0) for dcrnn. lambda_max only affects the Chebyshev models.
struct ModelConfig {
  ModelConfig(ModelKind kind, std::size_t in_channels, std::size_t filters, std::size_t k,
              LambdaMax lambda_max, double dropout);

  ModelKind kind;
  std::size_t in_channels;
  std::size_t filters;
  std::size_t k;
  LambdaMax lambda_max;
  double dropout;

  // Throws ConfigError on an invalid combination.
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

// Every ModelConfig field, in declaration order.
Hyperparameters inspect_hyperparameters(const ModelConfig& config);

// Inverse of inspect_hyperparameters. Throws ConfigError on a missing,
// unknown, or mistyped entry.
ModelConfig config_from_hyperparameters(const Hyperparameters& values);

}  // namespace tgnn
