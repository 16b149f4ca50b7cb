#include "tgnn/nn/config.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "tgnn/errors.hpp"

namespace tgnn {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::gconv_gru:
      return "gconv-gru";
    case ModelKind::gconv_lstm:
      return "gconv-lstm";
    case ModelKind::dcrnn:
      return "dcrnn";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& text) {
  if (text == "gconv-gru") return ModelKind::gconv_gru;
  if (text == "gconv-lstm") return ModelKind::gconv_lstm;
  if (text == "dcrnn") return ModelKind::dcrnn;
  throw ConfigError("unknown model '" + text + "' (expected gconv-gru, gconv-lstm or dcrnn)");
}

std::string to_string(const HyperValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&value)) {
    std::ostringstream out;
    out.precision(17);
    out << *d;
    return out.str();
  }
  return std::get<std::string>(value);
}

ModelConfig::ModelConfig(ModelKind kind_, std::size_t in_channels_, std::size_t filters_,
                         std::size_t k_, LambdaMax lambda_max_, double dropout_)
    : kind(kind_), in_channels(in_channels_), filters(filters_), k(k_), lambda_max(lambda_max_),
      dropout(dropout_) {
  validate();
}

void ModelConfig::validate() const {
  if (in_channels == 0) throw ConfigError("in_channels must be positive");
  if (filters == 0) throw ConfigError("filters must be positive");
  if (kind != ModelKind::dcrnn && k < 1) {
    throw ConfigError("Chebyshev filter size k must be >= 1 for " + to_string(kind));
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ConfigError("dropout must be in [0, 1), got " + std::to_string(dropout));
  }
}

Hyperparameters inspect_hyperparameters(const ModelConfig& config) {
  return {
      {"model", to_string(config.kind)},
      {"in_channels", static_cast<std::int64_t>(config.in_channels)},
      {"filters", static_cast<std::int64_t>(config.filters)},
      {"k", static_cast<std::int64_t>(config.k)},
      {"lambda_max", config.lambda_max.to_string()},
      {"dropout", config.dropout},
  };
}

namespace {

const HyperValue& require(const std::map<std::string, HyperValue>& values, const char* name) {
  auto it = values.find(name);
  if (it == values.end()) throw ConfigError(std::string("missing hyperparameter '") + name + "'");
  return it->second;
}

std::size_t as_count(const HyperValue& v, const char* name) {
  const auto* i = std::get_if<std::int64_t>(&v);
  if (i == nullptr || *i < 0) {
    throw ConfigError(std::string("hyperparameter '") + name + "' must be a nonnegative integer");
  }
  return static_cast<std::size_t>(*i);
}

double as_real(const HyperValue& v, const char* name) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw ConfigError(std::string("hyperparameter '") + name + "' must be a number");
}

std::string as_text(const HyperValue& v, const char* name) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (std::holds_alternative<double>(v) || std::holds_alternative<std::int64_t>(v)) {
    return to_string(v);
  }
  throw ConfigError(std::string("hyperparameter '") + name + "' must be a string");
}

}  // namespace

ModelConfig config_from_hyperparameters(const Hyperparameters& values) {
  std::map<std::string, HyperValue> by_name;
  for (const auto& [name, value] : values) {
    if (!by_name.emplace(name, value).second) {
      throw ConfigError("duplicate hyperparameter '" + name + "'");
    }
  }
  static const char* const known[] = {"model", "in_channels", "filters", "k", "lambda_max",
                                      "dropout"};
  for (const auto& [name, value] : by_name) {
    if (std::find(std::begin(known), std::end(known), name) == std::end(known)) {
      throw ConfigError("unknown hyperparameter '" + name + "'");
    }
  }
  return ModelConfig(parse_model_kind(as_text(require(by_name, "model"), "model")),
                     as_count(require(by_name, "in_channels"), "in_channels"),
                     as_count(require(by_name, "filters"), "filters"),
                     as_count(require(by_name, "k"), "k"),
                     LambdaMax::parse(as_text(require(by_name, "lambda_max"), "lambda_max")),
                     as_real(require(by_name, "dropout"), "dropout"));
}

}  // namespace tgnn
