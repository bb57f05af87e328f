#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "continuer/error.hpp"

namespace continuer {

struct FeatureVector {
  std::vector<double> values;
  std::vector<std::string> schema;

  bool operator==(const FeatureVector&) const = default;
};

// Percentile with linear interpolation between the closest order statistics
// (rank = q/100 * (n-1)). Input must be sorted ascending.
inline double percentile_sorted(const std::vector<double>& sorted, double q) {
  const double rank = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(rank);
  const double frac = rank - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Summarises per-layer weight arrays into the feature set used by the
// accuracy model: mean, population variance, and percentiles
// {0, 25, 50, 75, 100} per layer, concatenated in layer order.
inline FeatureVector extract_weight_features(const std::vector<std::vector<double>>& layers) {
  FeatureVector fv;
  for (size_t li = 0; li < layers.size(); ++li) {
    const auto& layer = layers[li];
    if (layer.empty())
      fail(errc::empty_layer, "layer " + std::to_string(li) + " has no weights");
    for (double v : layer) {
      if (!std::isfinite(v))
        fail(errc::non_finite, "layer " + std::to_string(li) + " contains a non-finite weight");
    }

    double mean = 0.0;
    for (double v : layer) mean += v;
    mean /= static_cast<double>(layer.size());
    double var = 0.0;
    for (double v : layer) var += (v - mean) * (v - mean);
    var /= static_cast<double>(layer.size());

    std::vector<double> sorted = layer;
    std::sort(sorted.begin(), sorted.end());

    const std::string prefix = "layer" + std::to_string(li) + ".";
    fv.values.push_back(mean);
    fv.schema.push_back(prefix + "mean");
    fv.values.push_back(var);
    fv.schema.push_back(prefix + "var");
    for (int q : {0, 25, 50, 75, 100}) {
      fv.values.push_back(percentile_sorted(sorted, q));
      fv.schema.push_back(prefix + "p" + std::to_string(q));
    }
  }
  return fv;
}

}  // namespace continuer
