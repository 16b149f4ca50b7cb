#include "tgnn/signal/temporal_signal.hpp"

#include <cmath>

#include "tgnn/errors.hpp"

namespace tgnn {

std::string to_string(SignalVariant variant) {
  switch (variant) {
    case SignalVariant::dynamic_graph_temporal_signal:
      return "dynamic_graph_temporal_signal";
    case SignalVariant::dynamic_graph_static_signal:
      return "dynamic_graph_static_signal";
    case SignalVariant::static_graph_temporal_signal:
      return "static_graph_temporal_signal";
  }
  return "unknown";
}

SignalVariant parse_signal_variant(const std::string& text) {
  if (text == "dynamic_graph_temporal_signal") return SignalVariant::dynamic_graph_temporal_signal;
  if (text == "dynamic_graph_static_signal") return SignalVariant::dynamic_graph_static_signal;
  if (text == "static_graph_temporal_signal") return SignalVariant::static_graph_temporal_signal;
  throw DataError("unknown signal variant '" + text + "'");
}

namespace {

std::string at_time(std::size_t t) { return " at t=" + std::to_string(t); }

void expect_count(const char* what, std::size_t actual, std::size_t expected,
                  SignalVariant variant) {
  if (actual != expected) {
    throw DataError(to_string(variant) + " needs " + std::to_string(expected) + " " + what +
                    ", got " + std::to_string(actual));
  }
}

}  // namespace

TemporalSignal TemporalSignal::build(SignalVariant variant, SignalComponents c) {
  const std::size_t steps = c.targets.size();
  if (steps == 0) throw DataError("temporal signal needs at least one snapshot");

  switch (variant) {
    case SignalVariant::static_graph_temporal_signal:
      expect_count("graphs", c.graphs.size(), 1, variant);
      expect_count("feature matrices", c.features.size(), steps, variant);
      break;
    case SignalVariant::dynamic_graph_static_signal:
      expect_count("graphs", c.graphs.size(), steps, variant);
      expect_count("feature matrices", c.features.size(), 1, variant);
      break;
    case SignalVariant::dynamic_graph_temporal_signal:
      expect_count("graphs", c.graphs.size(), steps, variant);
      expect_count("feature matrices", c.features.size(), steps, variant);
      break;
  }
  if (!c.masks.empty()) expect_count("masks", c.masks.size(), steps, variant);

  for (std::size_t t = 0; t < c.graphs.size(); ++t) {
    if (!c.graphs[t]) throw DataError("missing graph" + at_time(t));
  }
  const std::size_t nodes = c.graphs.front()->num_nodes();
  for (std::size_t t = 0; t < c.graphs.size(); ++t) {
    if (c.graphs[t]->num_nodes() != nodes) {
      throw DataError("graph has " + std::to_string(c.graphs[t]->num_nodes()) +
                      " nodes, expected " + std::to_string(nodes) + at_time(t));
    }
  }

  if (!c.features.front()) throw DataError("missing feature matrix" + at_time(0));
  const std::size_t width = c.features.front()->cols();
  if (width == 0) throw DataError("feature matrix has no columns" + at_time(0));
  for (std::size_t t = 0; t < c.features.size(); ++t) {
    const MatrixPtr& x = c.features[t];
    if (!x) throw DataError("missing feature matrix" + at_time(t));
    if (x->rows() != nodes || x->cols() != width) {
      throw DataError("feature matrix is " + to_string(x->shape()) + ", expected " +
                      to_string(Shape{nodes, width}) + at_time(t));
    }
    if (!x->all_finite()) throw DataError("feature matrix is not finite" + at_time(t));
  }
  for (std::size_t t = 0; t < steps; ++t) {
    const MatrixPtr& y = c.targets[t];
    if (!y) throw DataError("missing target" + at_time(t));
    if (y->rows() != nodes || y->cols() != 1) {
      throw DataError("target is " + to_string(y->shape()) + ", expected " +
                      to_string(Shape{nodes, 1}) + at_time(t));
    }
    if (!y->all_finite()) throw DataError("target is not finite" + at_time(t));
  }
  for (std::size_t t = 0; t < c.masks.size(); ++t) {
    if (c.masks[t] && c.masks[t]->size() != nodes) {
      throw DataError("mask has " + std::to_string(c.masks[t]->size()) + " entries, expected " +
                      std::to_string(nodes) + at_time(t));
    }
  }

  auto storage = std::make_shared<Storage>(Storage{variant, nodes, width, std::move(c)});
  return TemporalSignal(std::move(storage), 0, steps);
}

namespace {

std::vector<MatrixPtr> share_all(std::vector<Matrix> matrices) {
  std::vector<MatrixPtr> out;
  out.reserve(matrices.size());
  for (Matrix& m : matrices) out.push_back(std::make_shared<const Matrix>(std::move(m)));
  return out;
}

}  // namespace

TemporalSignal TemporalSignal::static_graph(GraphPtr graph, std::vector<Matrix> features,
                                            std::vector<Matrix> targets) {
  return build(SignalVariant::static_graph_temporal_signal,
               {{std::move(graph)}, share_all(std::move(features)), share_all(std::move(targets)),
                {}});
}

TemporalSignal TemporalSignal::dynamic_graph_static_signal(std::vector<GraphPtr> graphs,
                                                           Matrix features,
                                                           std::vector<Matrix> targets) {
  return build(SignalVariant::dynamic_graph_static_signal,
               {std::move(graphs), {std::make_shared<const Matrix>(std::move(features))},
                share_all(std::move(targets)), {}});
}

TemporalSignal TemporalSignal::dynamic_graph(std::vector<GraphPtr> graphs,
                                             std::vector<Matrix> features,
                                             std::vector<Matrix> targets) {
  return build(SignalVariant::dynamic_graph_temporal_signal,
               {std::move(graphs), share_all(std::move(features)), share_all(std::move(targets)),
                {}});
}

Snapshot TemporalSignal::at(std::size_t i) const {
  if (i >= count_) {
    throw RangeError("snapshot index " + std::to_string(i) + " out of range for " +
                     std::to_string(count_) + " snapshots");
  }
  const std::size_t t = begin_ + i;
  const SignalComponents& c = storage_->components;
  Snapshot s;
  s.graph = c.graphs.size() == 1 && variant() == SignalVariant::static_graph_temporal_signal
                ? c.graphs.front()
                : c.graphs[t];
  s.x = variant() == SignalVariant::dynamic_graph_static_signal ? c.features.front()
                                                                 : c.features[t];
  s.y = c.targets[t];
  s.mask = c.masks.empty() ? nullptr : c.masks[t];
  s.t = t;
  return s;
}

TemporalSignal TemporalSignal::slice(std::size_t begin, std::size_t count) const {
  if (begin > count_ || count > count_ - begin) {
    throw RangeError("slice [" + std::to_string(begin) + ", " + std::to_string(begin + count) +
                     ") out of range for " + std::to_string(count_) + " snapshots");
  }
  return TemporalSignal(storage_, begin_ + begin, count);
}

std::pair<TemporalSignal, TemporalSignal> temporal_signal_split(const TemporalSignal& signal,
                                                                double train_ratio) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw ConfigError("train_ratio must be in (0, 1), got " + std::to_string(train_ratio));
  }
  // The nudge keeps products like 0.29 * 100 = 28.999999999999996 on the intended integer.
  const double exact = train_ratio * static_cast<double>(signal.size());
  const auto train_count = static_cast<std::size_t>(std::floor(exact * (1.0 + 1e-12)));
  if (train_count == 0 || train_count >= signal.size()) {
    throw ConfigError("train_ratio " + std::to_string(train_ratio) + " on " +
                      std::to_string(signal.size()) + " snapshots leaves one side empty");
  }
  return {signal.slice(0, train_count), signal.slice(train_count, signal.size() - train_count)};
}

}  // namespace tgnn
