#pragma once

#include <optional>
#include <string>
#include <vector>

#include "continuer/error.hpp"

namespace continuer {

enum class LayerType {
  BatchNorm,
  Convolution,
  ReLU,
  Dense,
  Add,
  Dropout,
  DepthwiseConvolution,
  GlobalAveragePool,
  MaxPool,
  GlobalMaxPool,
};

inline const char* layer_type_name(LayerType t) {
  switch (t) {
    case LayerType::BatchNorm: return "BatchNorm";
    case LayerType::Convolution: return "Convolution";
    case LayerType::ReLU: return "ReLU";
    case LayerType::Dense: return "Dense";
    case LayerType::Add: return "Add";
    case LayerType::Dropout: return "Dropout";
    case LayerType::DepthwiseConvolution: return "DepthwiseConvolution";
    case LayerType::GlobalAveragePool: return "GlobalAveragePool";
    case LayerType::MaxPool: return "MaxPool";
    case LayerType::GlobalMaxPool: return "GlobalMaxPool";
  }
  return "Unknown";
}

inline LayerType layer_type_from_name(const std::string& name) {
  static const struct { const char* name; LayerType type; } table[] = {
      {"BatchNorm", LayerType::BatchNorm},
      {"Convolution", LayerType::Convolution},
      {"ReLU", LayerType::ReLU},
      {"Dense", LayerType::Dense},
      {"Add", LayerType::Add},
      {"Dropout", LayerType::Dropout},
      {"DepthwiseConvolution", LayerType::DepthwiseConvolution},
      {"GlobalAveragePool", LayerType::GlobalAveragePool},
      {"MaxPool", LayerType::MaxPool},
      {"GlobalMaxPool", LayerType::GlobalMaxPool},
  };
  for (const auto& e : table) {
    if (name == e.name) return e.type;
  }
  fail(errc::parse_error, "unknown layer type '" + name + "'");
}

inline bool layer_has_kernel(LayerType t) {
  return t == LayerType::Convolution || t == LayerType::DepthwiseConvolution ||
         t == LayerType::MaxPool;
}

inline bool layer_has_filters(LayerType t) { return t == LayerType::Convolution; }

inline bool layer_has_units(LayerType t) { return t == LayerType::Dense; }

// One layer of a DNN, described by the hyperparameters that drive its cost.
// kernel/stride exist only for Convolution, DepthwiseConvolution and MaxPool;
// filters only for Convolution; units only for Dense.
struct LayerSpec {
  LayerType type = LayerType::ReLU;
  int input_h = 1;
  int input_w = 1;
  int input_c = 1;
  std::optional<int> kernel;
  std::optional<int> stride;
  std::optional<int> filters;
  std::optional<int> units;

  bool operator==(const LayerSpec&) const = default;

  static LayerSpec plain(LayerType t, int h, int w, int c) {
    LayerSpec s;
    s.type = t;
    s.input_h = h;
    s.input_w = w;
    s.input_c = c;
    return s;
  }

  static LayerSpec conv(int h, int w, int c, int kernel, int stride, int filters) {
    LayerSpec s = plain(LayerType::Convolution, h, w, c);
    s.kernel = kernel;
    s.stride = stride;
    s.filters = filters;
    return s;
  }

  static LayerSpec depthwise(int h, int w, int c, int kernel, int stride) {
    LayerSpec s = plain(LayerType::DepthwiseConvolution, h, w, c);
    s.kernel = kernel;
    s.stride = stride;
    return s;
  }

  static LayerSpec max_pool(int h, int w, int c, int kernel, int stride) {
    LayerSpec s = plain(LayerType::MaxPool, h, w, c);
    s.kernel = kernel;
    s.stride = stride;
    return s;
  }

  static LayerSpec dense(int h, int w, int c, int units) {
    LayerSpec s = plain(LayerType::Dense, h, w, c);
    s.units = units;
    return s;
  }

  // Output spatial size. Convolutions use same-padding arithmetic, pooling
  // uses valid-padding; global pools and dense collapse to 1x1.
  std::pair<int, int> output_shape() const {
    switch (type) {
      case LayerType::Convolution:
      case LayerType::DepthwiseConvolution: {
        int s = stride.value_or(1);
        return {(input_h + s - 1) / s, (input_w + s - 1) / s};
      }
      case LayerType::MaxPool: {
        int k = kernel.value_or(1);
        int s = stride.value_or(1);
        return {(input_h - k) / s + 1, (input_w - k) / s + 1};
      }
      case LayerType::GlobalAveragePool:
      case LayerType::GlobalMaxPool:
      case LayerType::Dense:
        return {1, 1};
      default:
        return {input_h, input_w};
    }
  }

  int output_channels() const {
    if (type == LayerType::Convolution) return filters.value_or(input_c);
    if (type == LayerType::Dense) return units.value_or(input_c);
    return input_c;
  }
};

// Field-presence and positivity rules; violations are data, not exceptions.
inline void validate_layer(const LayerSpec& layer, const std::string& where,
                           std::vector<std::string>& out) {
  auto complain = [&](const std::string& what) { out.push_back(where + ": " + what); };

  if (layer.input_h <= 0 || layer.input_w <= 0) complain("non-positive input shape");
  if (layer.input_c <= 0) complain("non-positive input channels");

  const bool wants_kernel = layer_has_kernel(layer.type);
  if (wants_kernel != layer.kernel.has_value())
    complain(wants_kernel ? "missing kernel size" : "unexpected kernel size");
  if (wants_kernel != layer.stride.has_value())
    complain(wants_kernel ? "missing stride" : "unexpected stride");
  if (layer.kernel && *layer.kernel <= 0) complain("non-positive kernel size");
  if (layer.stride && *layer.stride <= 0) complain("non-positive stride");

  const bool wants_filters = layer_has_filters(layer.type);
  if (wants_filters != layer.filters.has_value())
    complain(wants_filters ? "missing filters" : "unexpected filters");
  if (layer.filters && *layer.filters <= 0) complain("non-positive filters");

  const bool wants_units = layer_has_units(layer.type);
  if (wants_units != layer.units.has_value())
    complain(wants_units ? "missing units" : "unexpected units");
  if (layer.units && *layer.units <= 0) complain("non-positive units");
}

}  // namespace continuer
