#include "gamemark/efg/backward_induction.hpp"

#include <cmath>
#include <unordered_set>

#include "gamemark/error.hpp"

namespace gamemark::efg {

namespace {

struct Frame {
  NodeId node;
  std::size_t child_count = 0;
  std::size_t next_child = 0;
  std::vector<double> chance_probs;  // empty at decision nodes
  int player = 0;
};

}  // namespace

ValueTable backward_induction(const Game& game, const SolveOptions& options) {
  ValueTable table;
  std::vector<Frame> stack;
  std::unordered_set<NodeId> on_path;

  auto enter = [&](NodeId node) -> bool {
    // returns false when the node is already solved
    if (table.values.contains(node)) return false;
    if (on_path.contains(node))
      throw StructuralError("backward_induction: cycle detected at node " +
                            std::to_string(node));
    if (++table.node_count > options.node_cap)
      throw ResourceError("backward_induction: node cap exceeded (" +
                          std::to_string(options.node_cap) + ")");

    if (game.is_terminal(node)) {
      std::vector<double> u = game.utilities(node);
      if (u.size() != static_cast<std::size_t>(game.num_players()))
        throw StructuralError("backward_induction: terminal utility arity mismatch");
      table.values.emplace(node, std::move(u));
      return false;
    }

    Frame frame;
    frame.node = node;
    frame.player = game.player_to_move(node);
    frame.child_count = game.legal_actions(node).size();
    if (frame.child_count == 0)
      throw StructuralError("backward_induction: non-terminal node with no actions");
    if (frame.player == kChance) {
      frame.chance_probs = game.chance_distribution(node);
      if (frame.chance_probs.size() != frame.child_count)
        throw StructuralError("backward_induction: chance distribution arity mismatch");
      double sum = 0.0;
      for (double p : frame.chance_probs) {
        if (p < 0.0)
          throw StructuralError("backward_induction: negative chance probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > options.chance_sum_tolerance)
        throw StructuralError("backward_induction: chance distribution does not sum to 1");
    } else if (frame.player < 0 ||
               frame.player >= game.num_players()) {
      throw StructuralError("backward_induction: player index out of range");
    }
    on_path.insert(node);
    stack.push_back(std::move(frame));
    return true;
  };

  enter(game.root());
  while (!stack.empty()) {
    Frame& frame = stack.back();
    if (frame.next_child < frame.child_count) {
      const NodeId child = game.apply(frame.node, frame.next_child);
      ++frame.next_child;
      enter(child);
      continue;
    }

    // all children solved; fold them
    const int players = game.num_players();
    if (frame.player == kChance) {
      std::vector<double> value(players, 0.0);
      for (std::size_t a = 0; a < frame.child_count; ++a) {
        const auto& child_value = table.values.at(game.apply(frame.node, a));
        for (int p = 0; p < players; ++p)
          value[p] += frame.chance_probs[a] * child_value[p];
      }
      table.values.emplace(frame.node, std::move(value));
    } else {
      std::size_t best = 0;
      double best_value = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < frame.child_count; ++a) {
        const double v =
            table.values.at(game.apply(frame.node, a))[frame.player];
        if (v > best_value) {
          best_value = v;
          best = a;
        }
      }
      table.values.emplace(frame.node,
                           table.values.at(game.apply(frame.node, best)));
      table.best_action.emplace(frame.node, best);
    }
    on_path.erase(frame.node);
    stack.pop_back();
  }
  return table;
}

std::vector<double> expected_utilities(const Game& game, const ValueTable& values,
                                       NodeId node) {
  if (game.is_terminal(node))
    throw ContractError("expected_utilities: terminal node");
  const int player = game.player_to_move(node);
  if (player == kChance)
    throw ContractError("expected_utilities: chance node");
  const std::size_t count = game.legal_actions(node).size();
  std::vector<double> u(count);
  for (std::size_t a = 0; a < count; ++a) {
    u[a] = values.at(game.apply(node, a))[player];
  }
  return u;
}

}  // namespace gamemark::efg
