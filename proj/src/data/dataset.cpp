#include "tgnn/data/dataset.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "tgnn/errors.hpp"

namespace tgnn {

namespace {

using Json = nlohmann::ordered_json;

// Generous upper bound that keeps a hostile header from driving huge allocations.
constexpr std::uint64_t kMaxNodes = 1u << 26;

std::string indexed(const std::string& field, std::size_t t) {
  return field + "[" + std::to_string(t) + "]";
}

const Json& require(const Json& obj, const char* key, const std::string& where = "document") {
  if (!obj.is_object()) throw DataError(where + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(where + " is missing field '" + key + "'");
  return *it;
}

std::uint64_t read_count(const Json& j, const std::string& field) {
  if (!j.is_number_unsigned()) {
    throw DataError("field '" + field + "' must be a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

double read_number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw DataError("field '" + field + "' must hold numbers");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw DataError("field '" + field + "' holds a non-finite number");
  return v;
}

void require_array(const Json& j, const std::string& field) {
  if (!j.is_array()) throw DataError("field '" + field + "' must be an array");
}

void require_length(const Json& j, std::size_t expected, const std::string& field) {
  require_array(j, field);
  if (j.size() != expected) {
    throw DataError("field '" + field + "' has " + std::to_string(j.size()) + " entries, expected " +
                    std::to_string(expected));
  }
}

// rows arrays of equal, positive width.
Matrix read_matrix(const Json& j, std::size_t rows, const std::string& field) {
  require_length(j, rows, field);
  if (rows == 0) throw DataError("field '" + field + "' is empty");
  const std::string first = field + "[0]";
  require_array(j[0], first);
  const std::size_t cols = j[0].size();
  if (cols == 0) throw DataError("field '" + first + "' has no columns");
  std::vector<double> values;
  values.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_field = indexed(field, r);
    require_length(j[r], cols, row_field);
    for (const Json& v : j[r]) values.push_back(read_number(v, row_field));
  }
  return Matrix(rows, cols, std::move(values));
}

Matrix read_column(const Json& j, std::size_t rows, const std::string& field) {
  require_length(j, rows, field);
  std::vector<double> values;
  values.reserve(rows);
  for (const Json& v : j) values.push_back(read_number(v, field));
  return Matrix(rows, 1, std::move(values));
}

GraphPtr read_edges(const Json& block, std::size_t nodes, const std::string& field) {
  const Json& index = require(block, "edge_index", "field '" + field + "'");
  const std::string index_field = field + ".edge_index";
  require_array(index, index_field);
  std::vector<Edge> edges;
  edges.reserve(index.size());
  for (std::size_t e = 0; e < index.size(); ++e) {
    const std::string pair_field = indexed(index_field, e);
    require_length(index[e], 2, pair_field);
    const std::uint64_t s = read_count(index[e][0], pair_field);
    const std::uint64_t t = read_count(index[e][1], pair_field);
    if (s >= nodes || t >= nodes) {
      throw DataError("field '" + pair_field + "' references a node outside [0, " +
                      std::to_string(nodes) + ")");
    }
    edges.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t)});
  }
  std::vector<double> weights;
  if (auto it = block.find("edge_weight"); it != block.end()) {
    const std::string weight_field = field + ".edge_weight";
    require_length(*it, edges.size(), weight_field);
    for (const Json& w : *it) weights.push_back(read_number(w, weight_field));
  }
  try {
    return std::make_shared<const Graph>(nodes, std::move(edges), std::move(weights));
  } catch (const DataError& e) {
    throw DataError("field '" + field + "': " + e.what());
  }
}

std::vector<bool> read_mask(const Json& j, std::size_t nodes, const std::string& field) {
  require_length(j, nodes, field);
  std::vector<bool> mask;
  mask.reserve(nodes);
  for (const Json& v : j) {
    if (!v.is_boolean()) throw DataError("field '" + field + "' must hold booleans");
    mask.push_back(v.get<bool>());
  }
  return mask;
}

DatasetMetadata read_metadata(const Json& doc) {
  DatasetMetadata meta;
  auto it = doc.find("metadata");
  if (it == doc.end()) return meta;
  if (!it->is_object()) throw DataError("field 'metadata' must be an object");
  if (auto f = it->find("name"); f != it->end()) {
    if (!f->is_string()) throw DataError("field 'metadata.name' must be a string");
    meta.name = f->get<std::string>();
  }
  if (auto f = it->find("time_span"); f != it->end()) {
    if (!f->is_string()) throw DataError("field 'metadata.time_span' must be a string");
    meta.time_span = f->get<std::string>();
  }
  if (auto f = it->find("lag"); f != it->end()) meta.lag = read_count(*f, "metadata.lag");
  return meta;
}

// Features of output snapshot i are the targets of original times i .. i+lag-1.
std::vector<MatrixPtr> lag_features(const std::vector<MatrixPtr>& targets, std::size_t lag) {
  const std::size_t nodes = targets.front()->rows();
  std::vector<MatrixPtr> out;
  out.reserve(targets.size() - lag);
  for (std::size_t t = lag; t < targets.size(); ++t) {
    Matrix x(nodes, lag);
    for (std::size_t j = 0; j < lag; ++j) {
      const Matrix& y = *targets[t - lag + j];
      for (std::size_t v = 0; v < nodes; ++v) x(v, j) = y(v, 0);
    }
    out.push_back(std::make_shared<const Matrix>(std::move(x)));
  }
  return out;
}

template <typename T>
std::vector<T> drop_front(std::vector<T> values, std::size_t count) {
  values.erase(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(count));
  return values;
}

Dataset build_dataset(const Json& doc) {
  if (!doc.is_object()) throw DataError("document must be a JSON object");
  const Json& version = require(doc, "schema_version");
  if (!version.is_number_integer() || version.get<std::int64_t>() != kDatasetSchemaVersion) {
    throw DataError("unsupported schema_version " + version.dump() + " (expected " +
                    std::to_string(kDatasetSchemaVersion) + ")");
  }
  const Json& variant_field = require(doc, "variant");
  if (!variant_field.is_string()) throw DataError("field 'variant' must be a string");
  const SignalVariant variant = parse_signal_variant(variant_field.get<std::string>());

  const std::uint64_t nodes = read_count(require(doc, "num_nodes"), "num_nodes");
  if (nodes == 0 || nodes > kMaxNodes) {
    throw DataError("field 'num_nodes' must be in [1, " + std::to_string(kMaxNodes) + "]");
  }
  const std::uint64_t steps = read_count(require(doc, "num_snapshots"), "num_snapshots");
  if (steps == 0) throw DataError("field 'num_snapshots' must be positive");

  DatasetMetadata meta = read_metadata(doc);
  const std::size_t lag = meta.lag;
  if (lag > 0) {
    if (variant == SignalVariant::dynamic_graph_static_signal) {
      throw DataError("metadata.lag builds time-varying features and cannot be used with " +
                      to_string(variant));
    }
    if (doc.contains("features")) {
      throw DataError("field 'features' must be absent when metadata.lag is set");
    }
    if (lag >= steps) {
      throw DataError("metadata.lag " + std::to_string(lag) + " leaves no snapshots out of " +
                      std::to_string(steps));
    }
  }

  SignalComponents c;
  const Json& targets = require(doc, "targets");
  require_length(targets, steps, "targets");
  for (std::size_t t = 0; t < steps; ++t) {
    c.targets.push_back(
        std::make_shared<const Matrix>(read_column(targets[t], nodes, indexed("targets", t))));
  }

  const Json& edges = require(doc, "edges");
  if (variant == SignalVariant::static_graph_temporal_signal) {
    c.graphs.push_back(read_edges(edges, nodes, "edges"));
  } else {
    require_length(edges, steps, "edges");
    for (std::size_t t = 0; t < steps; ++t) {
      c.graphs.push_back(read_edges(edges[t], nodes, indexed("edges", t)));
    }
  }

  if (lag > 0) {
    c.features = lag_features(c.targets, lag);
  } else {
    const Json& features = require(doc, "features");
    if (variant == SignalVariant::dynamic_graph_static_signal) {
      c.features.push_back(std::make_shared<const Matrix>(read_matrix(features, nodes, "features")));
    } else {
      require_length(features, steps, "features");
      for (std::size_t t = 0; t < steps; ++t) {
        c.features.push_back(
            std::make_shared<const Matrix>(read_matrix(features[t], nodes, indexed("features", t))));
      }
    }
  }

  if (auto it = doc.find("masks"); it != doc.end()) {
    require_length(*it, steps, "masks");
    for (std::size_t t = 0; t < steps; ++t) {
      c.masks.push_back(
          std::make_shared<const std::vector<bool>>(read_mask((*it)[t], nodes, indexed("masks", t))));
    }
  }

  if (lag > 0) {
    c.targets = drop_front(std::move(c.targets), lag);
    if (variant != SignalVariant::static_graph_temporal_signal) {
      c.graphs = drop_front(std::move(c.graphs), lag);
    }
    if (!c.masks.empty()) c.masks = drop_front(std::move(c.masks), lag);
  }

  return {TemporalSignal::build(variant, std::move(c)), std::move(meta)};
}

std::string describe_position(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i + 1 < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read dataset '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw DataError("error reading dataset '" + path + "'");
  return buffer.str();
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Json edges_json(const Graph& g) {
  Json index = Json::array();
  for (const Edge& e : g.edges()) index.push_back({e.source, e.target});
  return {{"edge_index", std::move(index)}, {"edge_weight", g.weights()}};
}

}  // namespace

Dataset parse_dataset(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("invalid JSON at " + describe_position(text, e.byte));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return build_dataset(doc);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed dataset: ") + e.what());
  }
}

Dataset read_dataset(const std::string& path) {
  try {
    return parse_dataset(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

TemporalSignal load_dataset(const std::string& path) { return read_dataset(path).signal; }

std::string serialize_dataset(const TemporalSignal& signal, const DatasetMetadata& metadata) {
  if (signal.empty()) throw DataError("cannot serialize an empty signal");
  const SignalVariant variant = signal.variant();
  Json doc;
  doc["schema_version"] = kDatasetSchemaVersion;
  doc["variant"] = to_string(variant);
  doc["num_nodes"] = signal.num_nodes();
  doc["num_snapshots"] = signal.size();

  if (variant == SignalVariant::static_graph_temporal_signal) {
    doc["edges"] = edges_json(*signal.at(0).graph);
  } else {
    Json per_time = Json::array();
    for (const Snapshot& s : signal) per_time.push_back(edges_json(*s.graph));
    doc["edges"] = std::move(per_time);
  }

  if (variant == SignalVariant::dynamic_graph_static_signal) {
    doc["features"] = matrix_json(*signal.at(0).x);
  } else {
    Json per_time = Json::array();
    for (const Snapshot& s : signal) per_time.push_back(matrix_json(*s.x));
    doc["features"] = std::move(per_time);
  }

  Json targets = Json::array();
  bool any_mask = false;
  for (const Snapshot& s : signal) {
    targets.push_back(std::vector<double>(s.y->values().begin(), s.y->values().end()));
    any_mask = any_mask || s.mask != nullptr;
  }
  doc["targets"] = std::move(targets);

  if (any_mask) {
    Json masks = Json::array();
    for (const Snapshot& s : signal) {
      masks.push_back(s.mask ? *s.mask : std::vector<bool>(signal.num_nodes(), true));
    }
    doc["masks"] = std::move(masks);
  }

  doc["metadata"] = {{"name", metadata.name}, {"time_span", metadata.time_span}, {"lag", 0}};
  return doc.dump() + "\n";
}

void save_dataset(const TemporalSignal& signal, const DatasetMetadata& metadata,
                  const std::string& path) {
  const std::string text = serialize_dataset(signal, metadata);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write dataset '" + path + "'");
  out << text;
  if (!out.flush()) throw Error("failed writing dataset '" + path + "'");
}

}  // namespace tgnn
