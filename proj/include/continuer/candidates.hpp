#pragma once

#include <algorithm>
#include <variant>
#include <vector>

#include "continuer/deployment.hpp"
#include "continuer/technique.hpp"

namespace continuer {

struct RepartitionAction {
  Deployment deployment;
};

struct EarlyExitAction {
  int exit_id = 0;
};

struct SkipAction {
  int skip_id = 0;
};

// One feasible recovery action together with its estimated metrics.
struct Candidate {
  Technique technique = Technique::Repartition;
  std::variant<RepartitionAction, EarlyExitAction, SkipAction> action;
  MetricTriple metrics;

  int action_id() const {
    if (const auto* e = std::get_if<EarlyExitAction>(&action)) return e->exit_id;
    if (const auto* s = std::get_if<SkipAction>(&action)) return s->skip_id;
    return 0;
  }
};

struct PredictorSet {
  const LatencyPredictor* latency = nullptr;
  const AccuracyPredictor* accuracy = nullptr;
};

struct EnumerateOptions {
  bool exhaustive_exits = false;
  double transfer_ms_per_hop = 0.0;
  double selection_ms = 0.0;  // folded into each candidate's downtime
};

namespace detail {

inline int count_node_hops(const std::vector<int>& node_sequence) {
  int hops = 0;
  for (size_t i = 1; i < node_sequence.size(); ++i)
    if (node_sequence[i] != node_sequence[i - 1]) ++hops;
  return hops;
}

}  // namespace detail

// End-to-end latency of a candidate: the summed per-layer latency of its
// execution path plus an optional per-hop transfer term. Repartitioning runs
// the whole graph on the new placement; an early exit runs the prefix up to
// its block plus the exit head; a skip runs everything except the bypassed
// blocks.
inline double compose_latency(const Deployment& dep, const Candidate& candidate,
                              const LatencyPredictor& latency_predictor,
                              double transfer_ms_per_hop = 0.0) {
  const DnnGraph& graph = *dep.graph;

  if (candidate.technique == Technique::Repartition) {
    const auto& action = std::get<RepartitionAction>(candidate.action);
    double total = predict_graph_latency(latency_predictor, graph.all_layers());
    if (transfer_ms_per_hop != 0.0)
      total += transfer_ms_per_hop * detail::count_node_hops(action.deployment.placement);
    return total;
  }

  if (candidate.technique == Technique::EarlyExit) {
    const int exit_id = std::get<EarlyExitAction>(candidate.action).exit_id;
    const ExitPoint* exit = graph.find_exit(exit_id);
    if (!exit) fail(errc::unresolved_action, "unknown exit id " + std::to_string(exit_id));
    double total = predict_graph_latency(latency_predictor, graph.layers_for_exit(*exit));
    if (transfer_ms_per_hop != 0.0) {
      std::vector<int> path(dep.placement.begin(),
                            dep.placement.begin() + exit->after_block + 1);
      total += transfer_ms_per_hop * detail::count_node_hops(path);
    }
    return total;
  }

  const int skip_id = std::get<SkipAction>(candidate.action).skip_id;
  const SkipConnection* skip = graph.find_skip(skip_id);
  if (!skip) fail(errc::unresolved_action, "unknown skip id " + std::to_string(skip_id));
  double total = predict_graph_latency(latency_predictor, graph.layers_for_skip(*skip));
  if (transfer_ms_per_hop != 0.0) {
    std::vector<int> path;
    for (size_t b = 0; b < dep.placement.size(); ++b)
      if (!skip->bypassed_blocks.count(static_cast<int>(b))) path.push_back(dep.placement[b]);
    total += transfer_ms_per_hop * detail::count_node_hops(path);
  }
  return total;
}

// Accuracy of a candidate: repartitioning preserves the trained baseline;
// exits and skips read the profiled accuracy of that action.
inline double compose_accuracy(const DnnGraph& graph, const Candidate& candidate,
                               const AccuracyPredictor& accuracy_predictor) {
  switch (candidate.technique) {
    case Technique::Repartition:
      return graph.baseline_accuracy;
    case Technique::EarlyExit:
      return accuracy_predictor.accuracy_for(graph.name, Technique::EarlyExit,
                                             candidate.action_id());
    case Technique::SkipConnection:
      return accuracy_predictor.accuracy_for(graph.name, Technique::SkipConnection,
                                             candidate.action_id());
  }
  fail(errc::unresolved_action, "unknown technique");
}

// Every feasible recovery action for a single-node failure:
//  - one repartitioning of all blocks over the surviving nodes,
//  - the latest exit point hosted strictly before the failed node (all
//    earlier exits too in exhaustive mode),
//  - every skip connection whose bypassed blocks exactly cover the failed
//    node's blocks and whose endpoints sit on live nodes.
inline std::vector<Candidate> enumerate_candidates(const Deployment& dep,
                                                   const FailureScenario& failure,
                                                   const PredictorSet& predictors,
                                                   const DowntimeTable& downtime,
                                                   const EnumerateOptions& options = {}) {
  const DnnGraph& graph = *dep.graph;
  const int failed = failure.failed_node;

  if (std::find(dep.nodes.begin(), dep.nodes.end(), failed) == dep.nodes.end())
    fail(errc::invalid_config, "failed node " + std::to_string(failed) + " is not deployed");
  const std::vector<int> failed_blocks = dep.blocks_on(failed);
  if (failed_blocks.empty() && dep.tail_node() != failed)
    fail(errc::invalid_config,
         "failed node " + std::to_string(failed) + " hosts no part of the model");

  std::vector<int> survivors;
  for (int n : dep.nodes)
    if (n != failed && dep.alive.count(n)) survivors.push_back(n);
  if (survivors.empty())
    fail(errc::no_survivors, "no surviving nodes after failure of " + std::to_string(failed));

  auto finish = [&](Candidate c) {
    c.metrics.latency_ms =
        compose_latency(dep, c, *predictors.latency, options.transfer_ms_per_hop);
    c.metrics.accuracy = compose_accuracy(graph, c, *predictors.accuracy);
    c.metrics.downtime_ms = compose_downtime(c.technique, downtime, options.selection_ms);
    return c;
  };

  std::vector<Candidate> out;

  {
    Candidate c;
    c.technique = Technique::Repartition;
    c.action = RepartitionAction{plan_repartition(graph, survivors, *predictors.latency)};
    out.push_back(finish(std::move(c)));
  }

  // exits whose block (and therefore whole prefix) precedes the failed node
  std::vector<const ExitPoint*> usable_exits;
  for (const auto& exit : graph.exits) {
    const int host = dep.node_of_block(exit.after_block);
    if (host == failed || !dep.alive.count(host)) continue;
    auto host_pos = std::find(dep.nodes.begin(), dep.nodes.end(), host);
    auto failed_pos = std::find(dep.nodes.begin(), dep.nodes.end(), failed);
    if (host_pos < failed_pos) usable_exits.push_back(&exit);
  }
  if (!usable_exits.empty()) {
    const size_t first = options.exhaustive_exits ? 0 : usable_exits.size() - 1;
    for (size_t i = first; i < usable_exits.size(); ++i) {
      Candidate c;
      c.technique = Technique::EarlyExit;
      c.action = EarlyExitAction{usable_exits[i]->exit_id};
      out.push_back(finish(std::move(c)));
    }
  }

  if (!failed_blocks.empty()) {
    const std::set<int> failed_set(failed_blocks.begin(), failed_blocks.end());
    for (const auto& skip : graph.skips) {
      if (skip.bypassed_blocks != failed_set) continue;
      if (!dep.alive.count(dep.node_of_block(skip.from_block)) ||
          dep.node_of_block(skip.from_block) == failed)
        continue;
      if (!dep.alive.count(dep.node_of_block(skip.to_block)) ||
          dep.node_of_block(skip.to_block) == failed)
        continue;
      Candidate c;
      c.technique = Technique::SkipConnection;
      c.action = SkipAction{skip.skip_id};
      out.push_back(finish(std::move(c)));
    }
  }

  if (out.empty())
    fail(errc::no_feasible_technique,
         "no recovery technique is feasible for node " + std::to_string(failed));
  return out;
}

}  // namespace continuer
