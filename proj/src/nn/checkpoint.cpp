#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tgnn/errors.hpp"
#include "tgnn/nn/model.hpp"

namespace tgnn {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormat = "tgnn.checkpoint";
constexpr int kVersion = 1;

Json hyper_to_json(const HyperValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

HyperValue hyper_from_json(const std::string& name, const Json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw DataError("checkpoint hyperparameter '" + name + "' has an unsupported type");
}

const Json& field(const Json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw DataError(std::string("checkpoint is missing field '") + name + "'");
  }
  return obj.at(name);
}

}  // namespace

std::string checkpoint_to_string(const RecurrentGCN& model) {
  Json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  Json hyper = Json::object();
  for (const auto& [name, value] : model.hyperparameters()) hyper[name] = hyper_to_json(value);
  doc["hyperparameters"] = std::move(hyper);
  doc["init"] = {{"scheme", RecurrentGCN::kInitScheme}, {"seed", model.init_seed()}};
  Json params = Json::array();
  for (const Parameter& p : model.parameters()) {
    Json entry;
    entry["name"] = p.name;
    entry["shape"] = {p.value.rows(), p.value.cols()};
    entry["values"] = std::vector<double>(p.value.values().begin(), p.value.values().end());
    params.push_back(std::move(entry));
  }
  doc["parameters"] = std::move(params);
  return doc.dump(1);
}

RecurrentGCN checkpoint_from_string(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (field(doc, "format") != kFormat) throw DataError("not a tgnn checkpoint");
    if (field(doc, "version") != kVersion) {
      throw DataError("unsupported checkpoint version " + field(doc, "version").dump());
    }
    Hyperparameters hyper;
    for (const auto& [name, value] : field(doc, "hyperparameters").items()) {
      hyper.emplace_back(name, hyper_from_json(name, value));
    }
    const Json& init = field(doc, "init");
    if (field(init, "scheme") != RecurrentGCN::kInitScheme) {
      throw DataError("unknown init scheme " + field(init, "scheme").dump());
    }
    ModelConfig config = [&] {
      try {
        return config_from_hyperparameters(hyper);
      } catch (const ConfigError& e) {
        throw DataError(std::string("checkpoint hyperparameters: ") + e.what());
      }
    }();
    RecurrentGCN model(config, field(init, "seed").get<std::uint64_t>());

    std::set<std::string> seen;
    for (const Json& entry : field(doc, "parameters")) {
      const auto name = field(entry, "name").get<std::string>();
      Parameter* p = model.parameters().find(name);
      if (p == nullptr) throw DataError("checkpoint has unknown parameter '" + name + "'");
      if (!seen.insert(name).second) throw DataError("checkpoint repeats parameter '" + name + "'");
      const auto shape = field(entry, "shape").get<std::vector<std::size_t>>();
      if (shape.size() != 2 || Shape{shape[0], shape[1]} != p->value.shape()) {
        throw DataError("parameter '" + name + "' has shape " + field(entry, "shape").dump() +
                        " in the checkpoint but " + to_string(p->value.shape()) + " in the model");
      }
      auto values = field(entry, "values").get<std::vector<double>>();
      if (values.size() != p->value.size()) {
        throw DataError("parameter '" + name + "' has " + std::to_string(values.size()) +
                        " values, expected " + std::to_string(p->value.size()));
      }
      p->value = Matrix(shape[0], shape[1], std::move(values));
      if (!p->value.all_finite()) throw DataError("parameter '" + name + "' is not finite");
    }
    if (seen.size() != model.parameters().size()) {
      for (const Parameter& p : model.parameters()) {
        if (!seen.contains(p.name)) throw DataError("checkpoint lacks parameter '" + p.name + "'");
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const RecurrentGCN& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write checkpoint '" + path + "'");
  out << checkpoint_to_string(model) << '\n';
  if (!out.flush()) throw Error("failed writing checkpoint '" + path + "'");
}

RecurrentGCN load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read checkpoint '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return checkpoint_from_string(buffer.str());
}

}  // namespace tgnn
