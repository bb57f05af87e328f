#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "continuer/features.hpp"
#include "continuer/gbdt.hpp"
#include "continuer/graph.hpp"
#include "continuer/profiles.hpp"

namespace continuer {

// Latency features per layer type: input shape and channel count always,
// kernel/stride/filters where the layer has them. Dense deliberately keys on
// shape and channels only.
inline std::vector<double> latency_features(const LayerSpec& layer) {
  std::vector<double> f = {static_cast<double>(layer.input_h),
                           static_cast<double>(layer.input_w),
                           static_cast<double>(layer.input_c)};
  if (layer.type == LayerType::Convolution || layer.type == LayerType::DepthwiseConvolution) {
    f.push_back(static_cast<double>(layer.kernel.value_or(1)));
    f.push_back(static_cast<double>(layer.stride.value_or(1)));
  }
  if (layer.type == LayerType::Convolution)
    f.push_back(static_cast<double>(layer.filters.value_or(1)));
  return f;
}

// Layer families without dedicated profile rows borrow another family's cost
// model: the pooling layers of the exit heads fall back through
// GlobalAveragePool to BatchNorm.
inline std::vector<LayerType> fallback_family(LayerType t) {
  switch (t) {
    case LayerType::MaxPool:
    case LayerType::GlobalMaxPool:
      return {LayerType::GlobalAveragePool, LayerType::BatchNorm};
    default:
      return {};
  }
}

// Per-layer latency estimator. Table mode answers exact hyperparameter keys
// bit-exactly and falls back to the nearest profiled row of the same family;
// fitted mode holds one boosted-tree model per layer type. Immutable once
// built, safe for concurrent prediction.
class LatencyPredictor {
 public:
  enum class Mode { Table, Fitted };

  static LatencyPredictor table_mode(const ProfileTable& profiles, std::string platform = "",
                                     bool use_estimates = false) {
    LatencyPredictor p;
    p.mode_ = Mode::Table;
    for (const auto& row : profiles.latency) {
      if (!platform.empty() && !row.platform.empty() && row.platform != platform) continue;
      if (use_estimates && !row.estimated_ms) continue;
      LatencyRow r = row;
      if (use_estimates) r.ms = *row.estimated_ms;
      p.rows_[row.layer_type].push_back(std::move(r));
    }
    return p;
  }

  static LatencyPredictor fitted_mode(std::map<LayerType, GbdtModel> models) {
    LatencyPredictor p;
    p.mode_ = Mode::Fitted;
    p.models_ = std::move(models);
    return p;
  }

  Mode mode() const { return mode_; }

  bool covers(LayerType t) const {
    if (has_direct(t)) return true;
    for (LayerType fb : fallback_family(t))
      if (has_direct(fb)) return true;
    return false;
  }

  double predict_layer(const LayerSpec& layer) const {
    LayerType family = layer.type;
    if (!has_direct(family)) {
      bool found = false;
      for (LayerType fb : fallback_family(layer.type)) {
        if (has_direct(fb)) {
          family = fb;
          found = true;
          break;
        }
      }
      if (!found)
        fail(errc::missing_layer_family,
             std::string("no latency model or profile rows for layer type ") +
                 layer_type_name(layer.type));
    }

    if (mode_ == Mode::Fitted) return gbdt_predict(models_.at(family), family_features(layer, family));

    const auto& rows = rows_.at(family);
    // exact hyperparameter match first
    if (family == layer.type) {
      for (const auto& row : rows) {
        if (row.input_h == layer.input_h && row.input_w == layer.input_w &&
            row.input_c == layer.input_c && row.kernel == layer.kernel &&
            row.stride == layer.stride && row.filters == layer.filters &&
            row.units == layer.units)
          return row.ms;
      }
    }
    // nearest profiled row of the family by feature distance
    const std::vector<double> want = family_features(layer, family);
    double best_dist = 0.0;
    const LatencyRow* best = nullptr;
    for (const auto& row : rows) {
      const std::vector<double> have = latency_features(row.spec());
      double dist = 0.0;
      for (size_t i = 0; i < want.size() && i < have.size(); ++i) {
        const double d = want[i] - have[i];
        dist += d * d;
      }
      if (!best || dist < best_dist) {
        best = &row;
        best_dist = dist;
      }
    }
    return best->ms;
  }

 private:
  bool has_direct(LayerType t) const {
    return mode_ == Mode::Fitted ? models_.count(t) > 0 : rows_.count(t) > 0;
  }

  // When predicting through a fallback family, only the shape features are
  // meaningful.
  static std::vector<double> family_features(const LayerSpec& layer, LayerType family) {
    if (family == layer.type) return latency_features(layer);
    LayerSpec plain = LayerSpec::plain(family, layer.input_h, layer.input_w, layer.input_c);
    return latency_features(plain);
  }

  Mode mode_ = Mode::Table;
  std::map<LayerType, std::vector<LatencyRow>> rows_;
  std::map<LayerType, GbdtModel> models_;
};

// Fits one boosted-tree latency model per required layer type from profiled
// rows. Types whose fallback family has rows need none of their own.
inline LatencyPredictor fit_latency_predictor(const ProfileTable& profiles,
                                              const std::string& platform,
                                              const GbdtParams& params,
                                              const std::vector<LayerType>& required_types) {
  std::map<LayerType, std::vector<const LatencyRow*>> by_type;
  for (const auto& row : profiles.latency) {
    if (!platform.empty() && !row.platform.empty() && row.platform != platform) continue;
    by_type[row.layer_type].push_back(&row);
  }

  auto fittable = [&](LayerType t) { return by_type.count(t) && by_type[t].size() >= 2; };

  std::vector<LayerType> to_fit;
  for (const auto& [t, rows] : by_type)
    if (rows.size() >= 2) to_fit.push_back(t);

  for (LayerType t : required_types) {
    if (fittable(t)) continue;
    bool fallback_ok = false;
    for (LayerType fb : fallback_family(t)) fallback_ok = fallback_ok || fittable(fb);
    if (!fallback_ok)
      fail(errc::insufficient_profiles,
           std::string("not enough latency rows to fit layer type ") + layer_type_name(t));
  }

  std::map<LayerType, GbdtModel> models;
  for (LayerType t : to_fit) {
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (const LatencyRow* row : by_type[t]) {
      X.push_back(latency_features(row->spec()));
      y.push_back(row->ms);
    }
    models[t] = gbdt_fit(X, y, params);
  }
  return LatencyPredictor::fitted_mode(std::move(models));
}

inline std::vector<LayerType> layer_types_of(const DnnGraph& graph) {
  std::set<LayerType> types;
  auto scan = [&](const std::vector<LayerSpec>& layers) {
    for (const auto& l : layers) types.insert(l.type);
  };
  scan(graph.head_layers);
  for (const auto& b : graph.blocks) scan(b.layers);
  scan(graph.tail_layers);
  for (const auto& e : graph.exits) scan(e.head_layers);
  return {types.begin(), types.end()};
}

struct GraphLatencyDiagnostics {
  long negative_clamps = 0;
};

// Sum of per-layer predictions over an execution path. Regression trees can
// extrapolate below zero near the edge of the profiled grid; such outputs
// clamp to zero and are counted.
inline double predict_graph_latency(const LatencyPredictor& pred,
                                    const std::vector<LayerSpec>& layers,
                                    GraphLatencyDiagnostics* diag = nullptr) {
  double total = 0.0;
  for (const auto& layer : layers) {
    double ms = pred.predict_layer(layer);
    if (ms < 0.0) {
      ms = 0.0;
      if (diag) ++diag->negative_clamps;
    }
    total += ms;
  }
  return total;
}

// Accuracy estimates per (model, technique, action). The profile table is
// the default source; a boosted-tree model over weight statistics can be
// attached for snapshot-based prediction.
class AccuracyPredictor {
 public:
  static AccuracyPredictor from_table(const ProfileTable& profiles, bool use_estimates = false) {
    AccuracyPredictor p;
    for (const auto& row : profiles.accuracy) {
      double value = row.fraction;
      if (use_estimates && row.estimated) value = *row.estimated;
      p.table_[row.key()] = value;
    }
    return p;
  }

  void attach_model(GbdtModel model) { fitted_ = std::move(model); }
  const std::optional<GbdtModel>& fitted() const { return fitted_; }

  double accuracy_for(const std::string& model, Technique technique, int action) const {
    auto it = table_.find(std::make_tuple(model, static_cast<int>(technique), action));
    if (it == table_.end())
      fail(errc::missing_profile, "no accuracy profile for " + model + "/" +
                                      technique_name(technique) + "/" + std::to_string(action));
    return it->second;
  }

  bool has(const std::string& model, Technique technique, int action) const {
    return table_.count(std::make_tuple(model, static_cast<int>(technique), action)) > 0;
  }

  double predict_from_weights(const FeatureVector& features) const {
    if (!fitted_)
      fail(errc::missing_profile, "no fitted accuracy model attached");
    return gbdt_predict(*fitted_, features.values);
  }

 private:
  std::map<std::tuple<std::string, int, int>, double> table_;
  std::optional<GbdtModel> fitted_;
};

// Weight-statistics dataset: CSV with one snapshot per row, feature columns
// first and the observed test accuracy in the final `test_accuracy` column.
struct WeightStatsDataset {
  std::vector<std::string> schema;
  std::vector<std::vector<double>> features;
  std::vector<double> targets;
};

inline WeightStatsDataset load_weight_stats_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse_error, "cannot open " + path.string());

  WeightStatsDataset ds;
  std::string line;
  if (!std::getline(in, line)) fail(errc::parse_error, path.string() + ": empty file");

  std::stringstream header(line);
  std::string col;
  std::vector<std::string> columns;
  while (std::getline(header, col, ',')) columns.push_back(col);
  if (columns.empty() || columns.back() != "test_accuracy")
    fail(errc::parse_error, path.string() + ": last column must be test_accuracy");
  ds.schema.assign(columns.begin(), columns.end() - 1);

  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::vector<double> values;
    while (std::getline(row, col, ',')) {
      try {
        values.push_back(std::stod(col));
      } catch (const std::exception&) {
        fail(errc::parse_error,
             path.string() + ":" + std::to_string(line_no) + ": bad number '" + col + "'");
      }
    }
    if (values.size() != columns.size())
      fail(errc::parse_error, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(columns.size()) + " columns, found " +
                                  std::to_string(values.size()));
    ds.targets.push_back(values.back());
    values.pop_back();
    ds.features.push_back(std::move(values));
  }
  if (ds.features.empty()) fail(errc::empty_dataset, path.string() + ": no data rows");
  return ds;
}

inline GbdtModel fit_accuracy_model(const WeightStatsDataset& ds, const GbdtParams& params = {}) {
  return gbdt_fit(ds.features, ds.targets, params);
}

}  // namespace continuer
