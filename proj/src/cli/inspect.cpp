#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tgnn/cli/commands.hpp"
#include "tgnn/data/dataset.hpp"
#include "tgnn/errors.hpp"

namespace tgnn::cli {

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string describe_dataset(const Dataset& data) {
  const TemporalSignal& s = data.signal;
  std::ostringstream out;
  out << "dataset";
  if (!data.metadata.name.empty()) out << " '" << data.metadata.name << "'";
  out << "\n";
  out << "  variant: " << to_string(s.variant()) << "\n";
  out << "  snapshots (T): " << s.size() << "\n";
  out << "  nodes (|V|): " << s.num_nodes() << "\n";
  out << "  features (d): " << s.num_features() << "\n";
  if (!data.metadata.time_span.empty()) out << "  time span: " << data.metadata.time_span << "\n";
  if (s.variant() == SignalVariant::static_graph_temporal_signal) {
    out << "  edges: " << s.at(0).graph->num_edges() << " (one shared graph)\n";
  } else {
    std::size_t lo = SIZE_MAX, hi = 0, total = 0;
    for (const Snapshot& snap : s) {
      const std::size_t e = snap.graph->num_edges();
      lo = std::min(lo, e);
      hi = std::max(hi, e);
      total += e;
    }
    out << "  edges per snapshot: min " << lo << ", max " << hi << ", mean "
        << fixed(static_cast<double>(total) / static_cast<double>(s.size()), 1) << "\n";
  }
  return out.str();
}

std::string describe_checkpoint(const RecurrentGCN& model) {
  std::ostringstream out;
  out << "checkpoint\n  hyperparameters:\n";
  for (const auto& [name, value] : model.hyperparameters()) {
    out << "    " << name << " = " << to_string(value) << "\n";
  }
  out << "  init: " << RecurrentGCN::kInitScheme << ", seed " << model.init_seed() << "\n";
  out << "  parameters (" << model.parameters().size() << " tensors, "
      << model.parameters().num_values() << " values):\n";
  for (const Parameter& p : model.parameters()) {
    out << "    " << p.name << " " << to_string(p.value.shape()) << "\n";
  }
  return out.str();
}

std::string describe_report(const TrainReport& report) {
  std::ostringstream out;
  out << "train report (library " << report.library_version << ")\n  config:\n";
  for (const auto& [name, value] : report.config) {
    out << "    " << name << " = " << to_string(value) << "\n";
  }
  out << "  epochs: " << report.losses.size() << ", optimizer steps: " << report.steps << "\n";
  if (!report.losses.empty()) {
    out << "  loss: first " << report.losses.front() << ", last " << report.losses.back() << "\n";
  }
  out << "  test MSE: " << fixed(report.test_mse, 4) << "\n";
  return out.str();
}

}  // namespace

std::string inspect_file(const std::string& path) {
  const std::string text = read_text(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    // Let the dataset parser produce the line/column diagnostic.
    return describe_dataset(parse_dataset(text));
  }
  if (doc.is_object() && doc.contains("format")) {
    return describe_checkpoint(checkpoint_from_string(text));
  }
  if (doc.is_object() && doc.contains("losses")) return describe_report(report_from_string(text));
  return describe_dataset(parse_dataset(text));
}

}  // namespace tgnn::cli
