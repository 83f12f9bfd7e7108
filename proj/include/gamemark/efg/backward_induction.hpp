#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "gamemark/efg/game.hpp"

namespace gamemark::efg {

// Exact subgame-perfect continuation values and best actions for every node
// reachable from the root. Nodes reached by several paths are solved once.
struct ValueTable {
  std::unordered_map<NodeId, std::vector<double>> values;
  std::unordered_map<NodeId, std::size_t> best_action;  // decision nodes only
  std::size_t node_count = 0;

  const std::vector<double>& at(NodeId node) const { return values.at(node); }
};

struct SolveOptions {
  std::size_t node_cap = 1'000'000;
  double chance_sum_tolerance = 1e-12;
};

// Propagates utilities from the leaves: max for the acting player at
// decision nodes (ties to the lowest canonical action index), probability-
// weighted average at chance nodes. Throws StructuralError on a cycle and
// ResourceError past the node cap.
ValueTable backward_induction(const Game& game, const SolveOptions& options = {});

// The acting player's continuation value of each child, in canonical action
// order: the exact oracle vector the watermark consumes. The node must be a
// non-terminal decision node.
std::vector<double> expected_utilities(const Game& game, const ValueTable& values,
                                       NodeId node);

}  // namespace gamemark::efg
