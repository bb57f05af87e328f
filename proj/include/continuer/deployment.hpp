#pragma once

#include <set>
#include <vector>

#include "continuer/graph.hpp"
#include "continuer/predictors.hpp"

namespace continuer {

// Block-to-node placement. Placement is contiguous: the blocks hosted on a
// node form one run, and runs follow node order. The stem shares the first
// block's node and the tail the last block's node.
struct Deployment {
  const DnnGraph* graph = nullptr;
  std::vector<int> nodes;      // ordered node ids
  std::vector<int> placement;  // block_id -> node id
  std::set<int> alive;

  int node_of_block(int block_id) const { return placement.at(block_id); }

  std::vector<int> blocks_on(int node_id) const {
    std::vector<int> out;
    for (size_t b = 0; b < placement.size(); ++b)
      if (placement[b] == node_id) out.push_back(static_cast<int>(b));
    return out;
  }

  int tail_node() const { return placement.back(); }

  std::vector<int> surviving_nodes() const {
    std::vector<int> out;
    for (int n : nodes)
      if (alive.count(n)) out.push_back(n);
    return out;
  }
};

struct FailureScenario {
  int failed_node = 0;
};

// One placement unit per node, in order: block 0 (with the stem) on the
// first node, block 1 on the second, and so on.
inline Deployment place_one_block_per_node(const DnnGraph& graph, int node_count) {
  const int units = static_cast<int>(graph.blocks.size());
  if (node_count < units)
    fail(errc::insufficient_nodes, graph.name + " needs " + std::to_string(units) +
                                       " nodes, got " + std::to_string(node_count));
  Deployment dep;
  dep.graph = &graph;
  for (int n = 1; n <= node_count; ++n) {
    dep.nodes.push_back(n);
    dep.alive.insert(n);
  }
  dep.placement.resize(units);
  for (int b = 0; b < units; ++b) dep.placement[b] = b + 1;
  return dep;
}

namespace detail {

// Per-block predicted compute cost, with the stem folded into the first
// block and the tail into the last so contiguous splits account for them.
inline std::vector<double> block_costs(const DnnGraph& graph, const LatencyPredictor& pred) {
  std::vector<double> costs;
  for (const auto& b : graph.blocks) costs.push_back(predict_graph_latency(pred, b.layers));
  if (!costs.empty()) {
    costs.front() += predict_graph_latency(pred, graph.head_layers);
    costs.back() += predict_graph_latency(pred, graph.tail_layers);
  }
  return costs;
}

struct SplitSearch {
  const std::vector<double>& costs;
  int parts;
  std::vector<int> current;
  std::vector<int> best;
  double best_max = 0.0;
  bool found = false;

  // Enumerates compositions of the block count into `parts` positive parts in
  // lexicographic order; only a strictly smaller makespan replaces the
  // incumbent, so ties resolve to the lexicographically smallest split.
  void recurse(int block, int part, double max_so_far) {
    const int n = static_cast<int>(costs.size());
    if (found && max_so_far >= best_max) return;
    if (part == parts - 1) {
      double load = 0.0;
      for (int b = block; b < n; ++b) load += costs[b];
      const double final_max = std::max(max_so_far, load);
      if (!found || final_max < best_max) {
        found = true;
        best_max = final_max;
        current.push_back(n - block);
        best = current;
        current.pop_back();
      }
      return;
    }
    double load = 0.0;
    const int remaining_parts = parts - part - 1;
    for (int size = 1; block + size + remaining_parts <= n; ++size) {
      load += costs[block + size - 1];
      current.push_back(size);
      recurse(block + size, part + 1, std::max(max_so_far, load));
      current.pop_back();
    }
  }
};

// For large block counts fall back to a greedy pass that closes a part once
// its load reaches the ideal average of what remains.
inline std::vector<int> greedy_split(const std::vector<double>& costs, int parts) {
  std::vector<int> sizes;
  const int n = static_cast<int>(costs.size());
  double remaining = 0.0;
  for (double c : costs) remaining += c;
  int b = 0;
  for (int p = 0; p < parts; ++p) {
    const int parts_left = parts - p;
    if (parts_left == 1) {
      sizes.push_back(n - b);
      break;
    }
    const int must_leave = parts_left - 1;
    const double target = remaining / parts_left;
    double load = costs[b++];
    int size = 1;
    while (load < target && (n - b) > must_leave) {
      load += costs[b++];
      ++size;
    }
    sizes.push_back(size);
    remaining -= load;
  }
  return sizes;
}

}  // namespace detail

// Contiguous placement of all blocks over the surviving nodes that minimizes
// the maximum predicted per-node compute latency. Exhaustive over contiguous
// splits for realistic block counts, greedy beyond that.
inline Deployment plan_repartition(const DnnGraph& graph, const std::vector<int>& surviving_nodes,
                                   const LatencyPredictor& latency_predictor) {
  if (surviving_nodes.empty())
    fail(errc::no_survivors, "cannot repartition " + graph.name + " over zero nodes");

  const std::vector<double> costs = detail::block_costs(graph, latency_predictor);
  const int block_count = static_cast<int>(costs.size());
  const int parts = std::min<int>(block_count, static_cast<int>(surviving_nodes.size()));

  std::vector<int> sizes;
  if (block_count <= 32) {
    detail::SplitSearch search{costs, parts, {}, {}, 0.0, false};
    search.recurse(0, 0, 0.0);
    sizes = search.best;
  } else {
    sizes = detail::greedy_split(costs, parts);
  }

  Deployment dep;
  dep.graph = &graph;
  dep.nodes = surviving_nodes;
  dep.placement.resize(block_count);
  int b = 0;
  for (int p = 0; p < parts; ++p)
    for (int i = 0; i < sizes[p]; ++i) dep.placement[b++] = surviving_nodes[p];
  for (int n : surviving_nodes) dep.alive.insert(n);
  return dep;
}

}  // namespace continuer
