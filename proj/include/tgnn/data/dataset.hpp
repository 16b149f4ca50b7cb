#pragma once

// On-disk dataset documents (JSON, schema_version 1). The field-by-field
// layout is described in docs/dataset-format.md.

#include <cstddef>
#include <string>

#include "tgnn/signal/temporal_signal.hpp"

namespace tgnn {

inline constexpr int kDatasetSchemaVersion = 1;

struct DatasetMetadata {
  std::string name;
  std::string time_span;
  // Features at time t are the targets of t-lag .. t-1; the first lag
  // snapshots are dropped. 0 means features are stored explicitly.
  std::size_t lag = 0;
};

struct Dataset {
  TemporalSignal signal;
  DatasetMetadata metadata;
};

// Throws DataError naming the line and column of a syntax error, or the field
// and time index of a schema violation.
Dataset parse_dataset(const std::string& text);
Dataset read_dataset(const std::string& path);
TemporalSignal load_dataset(const std::string& path);

// Writes the signal with explicit features (the metadata lag is recorded as 0
// because the window has already been applied). Parsing the result gives an
// elementwise-identical signal, and serializing that again gives the same text.
std::string serialize_dataset(const TemporalSignal& signal, const DatasetMetadata& metadata = {});
void save_dataset(const TemporalSignal& signal, const DatasetMetadata& metadata,
                  const std::string& path);

}  // namespace tgnn
