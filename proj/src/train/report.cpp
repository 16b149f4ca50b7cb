#include "tgnn/train/report.hpp"

#include <json.hpp>

#include "tgnn/errors.hpp"

#ifndef TGNN_VERSION
#define TGNN_VERSION "unknown"
#endif

namespace tgnn {

namespace {

using Json = nlohmann::ordered_json;

}  // namespace

std::string library_version() { return TGNN_VERSION; }

std::string report_to_string(const TrainReport& report) {
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["library_version"] = report.library_version;
  Json config = Json::object();
  for (const auto& [name, value] : report.config) {
    if (const auto* i = std::get_if<std::int64_t>(&value)) {
      config[name] = *i;
    } else if (const auto* d = std::get_if<double>(&value)) {
      config[name] = *d;
    } else {
      config[name] = std::get<std::string>(value);
    }
  }
  doc["config"] = std::move(config);
  doc["seed"] = report.seed;
  doc["losses"] = report.losses;
  doc["epoch_seconds"] = report.epoch_seconds;
  doc["test_mse"] = report.test_mse;
  doc["steps"] = report.steps;
  return doc.dump(2) + "\n";
}

TrainReport report_from_string(const std::string& text) {
  try {
    const Json doc = Json::parse(text);
    if (!doc.is_object()) throw DataError("report is not a JSON object");
    if (doc.value("schema_version", -1) != kReportSchemaVersion) {
      throw DataError("unsupported report schema_version");
    }
    TrainReport r;
    r.library_version = doc.at("library_version").get<std::string>();
    for (const auto& [name, value] : doc.at("config").items()) {
      if (value.is_number_integer()) {
        r.config.emplace_back(name, value.get<std::int64_t>());
      } else if (value.is_number_float()) {
        r.config.emplace_back(name, value.get<double>());
      } else if (value.is_string()) {
        r.config.emplace_back(name, value.get<std::string>());
      } else {
        throw DataError("report config entry '" + name + "' has an unsupported type");
      }
    }
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.losses = doc.at("losses").get<std::vector<double>>();
    r.epoch_seconds = doc.at("epoch_seconds").get<std::vector<double>>();
    r.test_mse = doc.at("test_mse").get<double>();
    r.steps = doc.at("steps").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace tgnn
