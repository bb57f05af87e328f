#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "continuer/error.hpp"

namespace continuer {

struct GbdtParams {
  double learning_rate = 0.1;
  int n_estimators = 100;
  int max_depth = 6;
  int min_samples_leaf = 1;
  // 0 = exact greedy split search over all midpoints; > 0 switches candidate
  // thresholds to equal-width bin edges.
  int histogram_bins = 0;
};

// Node of a regression tree, stored flat. Internal nodes route x[feature] <=
// threshold to `left`, otherwise `right`; leaves carry the fitted value.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;
  int max_depth = 0;

  bool operator==(const RegressionTree&) const = default;

  double predict(const std::vector<double>& x) const {
    int idx = 0;
    while (!nodes[idx].is_leaf())
      idx = (x[nodes[idx].feature] <= nodes[idx].threshold) ? nodes[idx].left : nodes[idx].right;
    return nodes[idx].value;
  }
};

// Additive ensemble fitted to squared-error residuals:
// prediction = base_score + learning_rate * sum of tree outputs.
struct GbdtModel {
  double base_score = 0.0;
  double learning_rate = 0.1;
  int n_estimators = 0;
  int max_depth = 0;
  size_t n_features = 0;
  std::vector<RegressionTree> trees;

  bool operator==(const GbdtModel&) const = default;
};

namespace detail {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double sse = 0.0;  // combined child SSE
};

struct TreeBuilder {
  const std::vector<std::vector<double>>& X;
  const std::vector<double>& targets;
  const GbdtParams& params;
  RegressionTree tree;

  // Best split by variance reduction (equivalently, minimum combined child
  // SSE). Features are scanned in ascending index order and thresholds in
  // ascending value order; only a strictly better SSE replaces the incumbent,
  // which pins the tie-break to lowest feature then lowest threshold.
  SplitChoice best_split(const std::vector<int>& rows) const {
    SplitChoice best;
    const size_t n_features = X[rows[0]].size();
    const int n = static_cast<int>(rows.size());

    std::vector<int> order(rows);
    std::vector<double> prefix_sum(n + 1, 0.0), prefix_sq(n + 1, 0.0);

    for (size_t f = 0; f < n_features; ++f) {
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (X[a][f] != X[b][f]) return X[a][f] < X[b][f];
        return a < b;
      });
      for (int i = 0; i < n; ++i) {
        const double y = targets[order[i]];
        prefix_sum[i + 1] = prefix_sum[i] + y;
        prefix_sq[i + 1] = prefix_sq[i] + y * y;
      }

      auto eval_threshold = [&](double thr) {
        // left = rows with x <= thr; order is sorted so find the boundary
        int left_n = static_cast<int>(
            std::upper_bound(order.begin(), order.end(), thr,
                             [&](double t, int row) { return t < X[row][f]; }) -
            order.begin());
        if (left_n < params.min_samples_leaf || n - left_n < params.min_samples_leaf) return;
        if (left_n == 0 || left_n == n) return;
        const double ls = prefix_sum[left_n], lq = prefix_sq[left_n];
        const double rs = prefix_sum[n] - ls, rq = prefix_sq[n] - lq;
        const double sse = (lq - ls * ls / left_n) + (rq - rs * rs / (n - left_n));
        if (!best.found || sse < best.sse) {
          best.found = true;
          best.feature = static_cast<int>(f);
          best.threshold = thr;
          best.sse = sse;
        }
      };

      if (params.histogram_bins > 0) {
        const double lo = X[order.front()][f];
        const double hi = X[order.back()][f];
        if (lo == hi) continue;
        for (int b = 1; b < params.histogram_bins; ++b)
          eval_threshold(lo + (hi - lo) * b / params.histogram_bins);
      } else {
        for (int i = 0; i + 1 < n; ++i) {
          const double a = X[order[i]][f];
          const double b = X[order[i + 1]][f];
          if (a == b) continue;
          eval_threshold(a + (b - a) / 2.0);
        }
      }
    }
    return best;
  }

  int build(std::vector<int> rows, int depth) {
    double sum = 0.0;
    for (int r : rows) sum += targets[r];
    const double mean = sum / static_cast<double>(rows.size());

    bool constant = true;
    for (int r : rows)
      if (targets[r] != targets[rows[0]]) {
        constant = false;
        break;
      }

    const int node_index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[node_index].value = mean;

    if (depth >= params.max_depth || constant || rows.size() < 2) return node_index;

    const SplitChoice split = best_split(rows);
    if (!split.found) return node_index;

    std::vector<int> left_rows, right_rows;
    for (int r : rows)
      (X[r][split.feature] <= split.threshold ? left_rows : right_rows).push_back(r);

    tree.nodes[node_index].feature = split.feature;
    tree.nodes[node_index].threshold = split.threshold;
    const int left = build(std::move(left_rows), depth + 1);
    tree.nodes[node_index].left = left;
    const int right = build(std::move(right_rows), depth + 1);
    tree.nodes[node_index].right = right;
    return node_index;
  }
};

inline void check_matrix(const std::vector<std::vector<double>>& X,
                         const std::vector<double>& y) {
  if (X.empty()) fail(errc::empty_dataset, "gbdt_fit: no rows");
  if (X.size() != y.size())
    fail(errc::length_mismatch, "gbdt_fit: " + std::to_string(X.size()) + " rows vs " +
                                    std::to_string(y.size()) + " targets");
  const size_t width = X[0].size();
  if (width == 0) fail(errc::schema_mismatch, "gbdt_fit: empty feature rows");
  for (size_t i = 0; i < X.size(); ++i) {
    if (X[i].size() != width)
      fail(errc::schema_mismatch, "gbdt_fit: row " + std::to_string(i) + " has " +
                                      std::to_string(X[i].size()) + " features, expected " +
                                      std::to_string(width));
    for (double v : X[i])
      if (!std::isfinite(v))
        fail(errc::non_finite, "gbdt_fit: non-finite feature in row " + std::to_string(i));
  }
  for (double v : y)
    if (!std::isfinite(v)) fail(errc::non_finite, "gbdt_fit: non-finite target");
}

}  // namespace detail

inline GbdtModel gbdt_fit(const std::vector<std::vector<double>>& X,
                          const std::vector<double>& y, const GbdtParams& params = {}) {
  detail::check_matrix(X, y);
  if (params.learning_rate <= 0.0 || params.learning_rate > 1.0)
    fail(errc::invalid_config, "gbdt_fit: learning rate must lie in (0,1]");

  GbdtModel model;
  model.learning_rate = params.learning_rate;
  model.n_estimators = params.n_estimators;
  model.max_depth = params.max_depth;
  model.n_features = X[0].size();

  double base = 0.0;
  for (double v : y) base += v;
  model.base_score = base / static_cast<double>(y.size());

  std::vector<double> residual(y.size());
  std::vector<double> current(y.size(), model.base_score);
  std::vector<int> all_rows(X.size());
  std::iota(all_rows.begin(), all_rows.end(), 0);

  for (int round = 0; round < params.n_estimators; ++round) {
    for (size_t i = 0; i < y.size(); ++i) residual[i] = y[i] - current[i];

    detail::TreeBuilder builder{X, residual, params, {}};
    builder.tree.max_depth = params.max_depth;
    builder.build(all_rows, 0);

    for (size_t i = 0; i < y.size(); ++i)
      current[i] += params.learning_rate * builder.tree.predict(X[i]);
    model.trees.push_back(std::move(builder.tree));
  }
  return model;
}

inline double gbdt_predict(const GbdtModel& model, const std::vector<double>& x) {
  if (x.size() != model.n_features)
    fail(errc::schema_mismatch, "gbdt_predict: " + std::to_string(x.size()) +
                                    " features, model expects " +
                                    std::to_string(model.n_features));
  for (double v : x)
    if (!std::isfinite(v)) fail(errc::non_finite, "gbdt_predict: non-finite feature");

  double acc = model.base_score;
  for (const auto& tree : model.trees) acc += model.learning_rate * tree.predict(x);
  return acc;
}

// JSON dump of the fitted ensemble; numbers round-trip bit-exactly.
inline nlohmann::ordered_json gbdt_to_json(const GbdtModel& model) {
  nlohmann::ordered_json j;
  j["base_score"] = model.base_score;
  j["learning_rate"] = model.learning_rate;
  j["n_estimators"] = model.n_estimators;
  j["max_depth"] = model.max_depth;
  j["n_features"] = model.n_features;
  nlohmann::ordered_json trees = nlohmann::ordered_json::array();
  for (const auto& tree : model.trees) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto& n : tree.nodes)
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"value", n.value}});
    trees.push_back({{"max_depth", tree.max_depth}, {"nodes", nodes}});
  }
  j["trees"] = trees;
  return j;
}

inline GbdtModel gbdt_from_json(const nlohmann::ordered_json& j) {
  try {
    GbdtModel model;
    model.base_score = j.at("base_score").get<double>();
    model.learning_rate = j.at("learning_rate").get<double>();
    model.n_estimators = j.at("n_estimators").get<int>();
    model.max_depth = j.at("max_depth").get<int>();
    model.n_features = j.at("n_features").get<size_t>();
    for (const auto& jt : j.at("trees")) {
      RegressionTree tree;
      tree.max_depth = jt.at("max_depth").get<int>();
      for (const auto& jn : jt.at("nodes")) {
        TreeNode n;
        n.feature = jn.at("feature").get<int>();
        n.threshold = jn.at("threshold").get<double>();
        n.left = jn.at("left").get<int>();
        n.right = jn.at("right").get<int>();
        n.value = jn.at("value").get<double>();
        tree.nodes.push_back(n);
      }
      model.trees.push_back(std::move(tree));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, std::string("gbdt model: ") + e.what());
  }
}

}  // namespace continuer
