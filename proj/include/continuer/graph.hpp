#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "continuer/layer.hpp"

namespace continuer {

// A contiguous group of layers, the atomic unit of placement on a node.
struct Block {
  int block_id = 0;
  std::vector<LayerSpec> layers;
  bool is_residual = false;

  bool operator==(const Block&) const = default;
};

// Auxiliary classifier attached behind a block; requests can terminate here.
struct ExitPoint {
  int exit_id = 0;  // 1-based, E1..En
  int after_block = 0;
  std::vector<LayerSpec> head_layers;

  bool operator==(const ExitPoint&) const = default;
};

// Direct edge from one block's output to a later block's input. Everything
// strictly between the endpoints is bypassed.
struct SkipConnection {
  int skip_id = 0;
  int from_block = 0;
  int to_block = 0;
  std::set<int> bypassed_blocks;

  bool operator==(const SkipConnection&) const = default;
};

// Structural model of a DNN: stem, ordered blocks, tail, plus the exit points
// and skip connections available for failure recovery. Immutable after
// construction; safe to share read-only across concurrent evaluations.
struct DnnGraph {
  std::string name;
  std::vector<LayerSpec> head_layers;
  std::vector<Block> blocks;
  std::vector<LayerSpec> tail_layers;
  std::vector<ExitPoint> exits;
  std::vector<SkipConnection> skips;
  double baseline_accuracy = 0.0;

  bool operator==(const DnnGraph&) const = default;

  const ExitPoint* find_exit(int exit_id) const {
    for (const auto& e : exits)
      if (e.exit_id == exit_id) return &e;
    return nullptr;
  }

  const SkipConnection* find_skip(int skip_id) const {
    for (const auto& s : skips)
      if (s.skip_id == skip_id) return &s;
    return nullptr;
  }

  // Full execution path: stem, every block, tail.
  std::vector<LayerSpec> all_layers() const {
    std::vector<LayerSpec> out = head_layers;
    for (const auto& b : blocks) out.insert(out.end(), b.layers.begin(), b.layers.end());
    out.insert(out.end(), tail_layers.begin(), tail_layers.end());
    return out;
  }

  // Path taken when terminating at an exit: stem, blocks up to and including
  // the exit's block, then the exit head.
  std::vector<LayerSpec> layers_for_exit(const ExitPoint& exit) const {
    std::vector<LayerSpec> out = head_layers;
    for (const auto& b : blocks) {
      if (b.block_id > exit.after_block) break;
      out.insert(out.end(), b.layers.begin(), b.layers.end());
    }
    out.insert(out.end(), exit.head_layers.begin(), exit.head_layers.end());
    return out;
  }

  // Path taken when routing over a skip: the full graph minus the bypassed
  // blocks.
  std::vector<LayerSpec> layers_for_skip(const SkipConnection& skip) const {
    std::vector<LayerSpec> out = head_layers;
    for (const auto& b : blocks) {
      if (skip.bypassed_blocks.count(b.block_id)) continue;
      out.insert(out.end(), b.layers.begin(), b.layers.end());
    }
    out.insert(out.end(), tail_layers.begin(), tail_layers.end());
    return out;
  }
};

// Structural validation. Returns an empty list iff every invariant holds;
// each entry names the offending element.
inline std::vector<std::string> validate_graph(const DnnGraph& graph) {
  std::vector<std::string> violations;
  const int block_count = static_cast<int>(graph.blocks.size());

  for (size_t i = 0; i < graph.head_layers.size(); ++i)
    validate_layer(graph.head_layers[i], "stem layer " + std::to_string(i), violations);
  for (size_t i = 0; i < graph.tail_layers.size(); ++i)
    validate_layer(graph.tail_layers[i], "tail layer " + std::to_string(i), violations);

  for (int i = 0; i < block_count; ++i) {
    const Block& b = graph.blocks[i];
    if (b.block_id != i)
      violations.push_back("block ids not contiguous: expected " + std::to_string(i) +
                           ", found " + std::to_string(b.block_id));
    if (b.layers.empty())
      violations.push_back("block " + std::to_string(b.block_id) + " has no layers");
    for (size_t j = 0; j < b.layers.size(); ++j)
      validate_layer(b.layers[j],
                     "block " + std::to_string(b.block_id) + " layer " + std::to_string(j),
                     violations);
  }

  auto valid_block = [&](int id) { return id >= 0 && id < block_count; };

  std::set<int> exit_blocks;
  int prev_after = -1;
  int prev_exit_id = 0;
  for (const auto& e : graph.exits) {
    if (!valid_block(e.after_block)) {
      violations.push_back("dangling exit reference: " + std::to_string(e.after_block));
      continue;
    }
    if (!exit_blocks.insert(e.after_block).second)
      violations.push_back("duplicate exit on block " + std::to_string(e.after_block));
    if (e.after_block <= prev_after || e.exit_id <= prev_exit_id)
      violations.push_back("exit ordering broken at exit " + std::to_string(e.exit_id));
    prev_after = e.after_block;
    prev_exit_id = e.exit_id;
    for (size_t j = 0; j < e.head_layers.size(); ++j)
      validate_layer(e.head_layers[j],
                     "exit " + std::to_string(e.exit_id) + " head layer " + std::to_string(j),
                     violations);
  }

  std::set<int> bypassed_anywhere;
  for (const auto& s : graph.skips) {
    if (!valid_block(s.from_block) || !valid_block(s.to_block)) {
      violations.push_back("dangling skip reference: skip " + std::to_string(s.skip_id));
      continue;
    }
    if (s.from_block >= s.to_block) {
      violations.push_back("skip endpoints not ordered");
      continue;
    }
    std::set<int> expected;
    for (int b = s.from_block + 1; b < s.to_block; ++b) expected.insert(b);
    if (s.bypassed_blocks != expected)
      violations.push_back("skip " + std::to_string(s.skip_id) +
                           " bypass set does not match its endpoints");
    for (int b : s.bypassed_blocks) {
      if (!bypassed_anywhere.insert(b).second)
        violations.push_back("block " + std::to_string(b) +
                             " lies inside two overlapping skip paths");
    }
  }

  if (graph.baseline_accuracy < 0.0 || graph.baseline_accuracy > 1.0)
    violations.push_back("baseline accuracy outside [0,1]");

  return violations;
}

}  // namespace continuer
