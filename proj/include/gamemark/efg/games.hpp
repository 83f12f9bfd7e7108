#pragma once

#include <string>
#include <vector>

#include "gamemark/efg/game.hpp"

namespace gamemark::efg {

// One decision by player 0, one leaf payoff per action.
class OneShotGame final : public Game {
 public:
  explicit OneShotGame(std::vector<double> payoffs);

  int num_players() const override { return 1; }
  NodeId root() const override { return 0; }
  bool is_terminal(NodeId node) const override { return node != 0; }
  int player_to_move(NodeId) const override { return 0; }
  std::vector<std::string> legal_actions(NodeId node) const override;
  NodeId apply(NodeId node, std::size_t action_index) const override;
  std::vector<double> utilities(NodeId node) const override;
  std::string observation(NodeId node) const override;
  std::vector<double> chance_distribution(NodeId) const override;

 private:
  std::vector<double> payoffs_;
  std::vector<std::string> actions_;
};

// A chance root over leaf payoffs: value is the plain expectation.
class ChanceRootGame final : public Game {
 public:
  ChanceRootGame(std::vector<double> probabilities, std::vector<double> payoffs);

  int num_players() const override { return 1; }
  NodeId root() const override { return 0; }
  bool is_terminal(NodeId node) const override { return node != 0; }
  int player_to_move(NodeId node) const override;
  std::vector<std::string> legal_actions(NodeId node) const override;
  NodeId apply(NodeId node, std::size_t action_index) const override;
  std::vector<double> utilities(NodeId node) const override;
  std::string observation(NodeId node) const override;
  std::vector<double> chance_distribution(NodeId node) const override;

 private:
  std::vector<double> probabilities_;
  std::vector<double> payoffs_;
  std::vector<std::string> actions_;
};

// Tic-tac-toe with utilities (+1, -1) for a win, (0, 0) for a draw. Node ids
// encode the board, so transposed move orders share a subgame.
class TicTacToeGame final : public Game {
 public:
  int num_players() const override { return 2; }
  NodeId root() const override { return 0; }
  bool is_terminal(NodeId node) const override;
  int player_to_move(NodeId node) const override;
  std::vector<std::string> legal_actions(NodeId node) const override;
  NodeId apply(NodeId node, std::size_t action_index) const override;
  std::vector<double> utilities(NodeId node) const override;
  std::string observation(NodeId node) const override;
  std::vector<double> chance_distribution(NodeId) const override;
};

}  // namespace gamemark::efg
