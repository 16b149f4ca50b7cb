#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tgnn/nn/config.hpp"

namespace tgnn {

inline constexpr int kReportSchemaVersion = 1;

// Library version baked in at build time.
std::string library_version();

struct TrainReport {
  Hyperparameters config;  // run configuration, echoed in order
  std::uint64_t seed = 0;
  std::vector<double> losses;
  std::vector<double> epoch_seconds;
  double test_mse = 0.0;
  std::uint64_t steps = 0;
  std::string library_version = tgnn::library_version();
};

// Pretty-printed JSON with a trailing newline. Doubles use the shortest text
// that reads back to the same bits, so equal reports serialize identically.
std::string report_to_string(const TrainReport& report);
// Throws DataError on malformed input or an unknown schema_version.
TrainReport report_from_string(const std::string& text);

}  // namespace tgnn
