#include "gamemark/efg/games.hpp"

#include <array>
#include <cstdio>

#include "gamemark/error.hpp"

namespace gamemark::efg {

namespace {
std::vector<std::string> indexed_actions(std::size_t count) {
  std::vector<std::string> actions;
  actions.reserve(count);
  for (std::size_t a = 0; a < count; ++a) {
    char name[16];
    std::snprintf(name, sizeof(name), "a%02d", int(a));
    actions.emplace_back(name);
  }
  return actions;
}
}  // namespace

OneShotGame::OneShotGame(std::vector<double> payoffs)
    : payoffs_(std::move(payoffs)), actions_(indexed_actions(payoffs_.size())) {
  if (payoffs_.empty()) throw ContractError("OneShotGame: need at least one action");
}

std::vector<std::string> OneShotGame::legal_actions(NodeId node) const {
  return node == 0 ? actions_ : std::vector<std::string>{};
}

NodeId OneShotGame::apply(NodeId node, std::size_t action_index) const {
  if (node != 0 || action_index >= payoffs_.size())
    throw ContractError("OneShotGame: bad transition");
  return action_index + 1;
}

std::vector<double> OneShotGame::utilities(NodeId node) const {
  if (node == 0) throw ContractError("OneShotGame: utilities at root");
  return {payoffs_[node - 1]};
}

std::string OneShotGame::observation(NodeId node) const {
  return "oneshot:" + std::to_string(node);
}

std::vector<double> OneShotGame::chance_distribution(NodeId) const {
  throw ContractError("OneShotGame: no chance nodes");
}

ChanceRootGame::ChanceRootGame(std::vector<double> probabilities,
                               std::vector<double> payoffs)
    : probabilities_(std::move(probabilities)),
      payoffs_(std::move(payoffs)),
      actions_(indexed_actions(payoffs_.size())) {
  if (probabilities_.size() != payoffs_.size() || payoffs_.empty())
    throw ContractError("ChanceRootGame: arity mismatch");
}

int ChanceRootGame::player_to_move(NodeId node) const {
  if (node != 0) throw ContractError("ChanceRootGame: terminal has no player");
  return kChance;
}

std::vector<std::string> ChanceRootGame::legal_actions(NodeId node) const {
  return node == 0 ? actions_ : std::vector<std::string>{};
}

NodeId ChanceRootGame::apply(NodeId node, std::size_t action_index) const {
  if (node != 0 || action_index >= payoffs_.size())
    throw ContractError("ChanceRootGame: bad transition");
  return action_index + 1;
}

std::vector<double> ChanceRootGame::utilities(NodeId node) const {
  if (node == 0) throw ContractError("ChanceRootGame: utilities at root");
  return {payoffs_[node - 1]};
}

std::string ChanceRootGame::observation(NodeId node) const {
  return "chance:" + std::to_string(node);
}

std::vector<double> ChanceRootGame::chance_distribution(NodeId node) const {
  if (node != 0) throw ContractError("ChanceRootGame: not a chance node");
  return probabilities_;
}

// Tic-tac-toe boards pack into base-3 ids: cell i contributes
// {empty: 0, X: 1, O: 2} * 3^i.
namespace {

std::array<int, 9> unpack(NodeId node) {
  std::array<int, 9> cells{};
  for (int i = 0; i < 9; ++i) {
    cells[i] = int(node % 3);
    node /= 3;
  }
  return cells;
}

NodeId pack(const std::array<int, 9>& cells) {
  NodeId node = 0;
  for (int i = 8; i >= 0; --i) node = node * 3 + cells[i];
  return node;
}

constexpr int kLines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                              {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};

int winner(const std::array<int, 9>& cells) {
  for (const auto& line : kLines) {
    const int mark = cells[line[0]];
    if (mark != 0 && cells[line[1]] == mark && cells[line[2]] == mark)
      return mark;  // 1 = X, 2 = O
  }
  return 0;
}

int filled(const std::array<int, 9>& cells) {
  int count = 0;
  for (int c : cells)
    if (c != 0) ++count;
  return count;
}

}  // namespace

bool TicTacToeGame::is_terminal(NodeId node) const {
  const auto cells = unpack(node);
  return winner(cells) != 0 || filled(cells) == 9;
}

int TicTacToeGame::player_to_move(NodeId node) const {
  return filled(unpack(node)) % 2;  // X (player 0) moves on even counts
}

std::vector<std::string> TicTacToeGame::legal_actions(NodeId node) const {
  const auto cells = unpack(node);
  if (winner(cells) != 0) return {};
  std::vector<std::string> actions;
  for (int i = 0; i < 9; ++i) {
    if (cells[i] == 0) actions.push_back(std::string(1, char('0' + i)));
  }
  return actions;
}

NodeId TicTacToeGame::apply(NodeId node, std::size_t action_index) const {
  auto cells = unpack(node);
  const int mark = filled(cells) % 2 == 0 ? 1 : 2;
  std::size_t seen = 0;
  for (int i = 0; i < 9; ++i) {
    if (cells[i] != 0) continue;
    if (seen++ == action_index) {
      cells[i] = mark;
      return pack(cells);
    }
  }
  throw ContractError("TicTacToeGame: action index out of range");
}

std::vector<double> TicTacToeGame::utilities(NodeId node) const {
  switch (winner(unpack(node))) {
    case 1: return {1.0, -1.0};
    case 2: return {-1.0, 1.0};
    default: return {0.0, 0.0};
  }
}

std::string TicTacToeGame::observation(NodeId node) const {
  const auto cells = unpack(node);
  std::string board(9, '.');
  for (int i = 0; i < 9; ++i) {
    if (cells[i] == 1) board[i] = 'x';
    if (cells[i] == 2) board[i] = 'o';
  }
  return "ttt:" + board;
}

std::vector<double> TicTacToeGame::chance_distribution(NodeId) const {
  throw ContractError("TicTacToeGame: no chance nodes");
}

}  // namespace gamemark::efg
