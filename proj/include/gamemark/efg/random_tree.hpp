#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "gamemark/efg/game.hpp"

namespace gamemark::efg {

// Synthetic test bed: a complete tree of fixed depth and branching with
// alternating players and iid uniform leaf payoffs. Two generators built
// from the same spec produce identical games (actions, observations,
// payoffs).
struct RandomTreeSpec {
  int depth = 3;                 // plies to a leaf, >= 1
  int branching = 2;             // actions per decision, >= 2
  int players = 2;               // 1 or 2, alternating by depth
  std::uint64_t payoff_seed = 0;
  double value_spread = 1.0;     // leaf payoffs uniform on [0, value_spread)

  void validate() const;

  // One spec per line: space-separated key=value tokens, e.g.
  //   depth=4 branching=3 players=2 payoff_seed=7 value_spread=1.0
  static RandomTreeSpec parse(const std::string& line);
  std::string serialize() const;
};

class RandomTreeGame final : public Game {
 public:
  explicit RandomTreeGame(const RandomTreeSpec& spec);

  const RandomTreeSpec& spec() const { return spec_; }

  int num_players() const override { return spec_.players; }
  NodeId root() const override { return 0; }
  bool is_terminal(NodeId node) const override;
  int player_to_move(NodeId node) const override;
  std::vector<std::string> legal_actions(NodeId node) const override;
  NodeId apply(NodeId node, std::size_t action_index) const override;
  std::vector<double> utilities(NodeId node) const override;
  std::string observation(NodeId node) const override;
  std::vector<double> chance_distribution(NodeId node) const override;

 private:
  int depth_of(NodeId node) const;

  RandomTreeSpec spec_;
  std::vector<std::string> action_names_;
  std::vector<NodeId> level_start_;  // level_start_[d] = first id at depth d
};

}  // namespace gamemark::efg
