#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gamemark::efg {

// Player index of the chance player.
inline constexpr int kChance = -1;

// Opaque per-game node handle. Games guarantee that equal ids denote the
// same continuation; a revisit of an id on a single root-to-leaf path is a
// structural error (the game graph has a cycle).
using NodeId = std::uint64_t;

// A finite perfect-information extensive-form game. Implementations must be
// pure: every accessor is a function of the node id alone, safe for
// unrestricted concurrent use.
class Game {
 public:
  virtual ~Game() = default;

  virtual int num_players() const = 0;
  virtual NodeId root() const = 0;
  virtual bool is_terminal(NodeId node) const = 0;

  // Acting player at a non-terminal node; kChance at chance nodes.
  virtual int player_to_move(NodeId node) const = 0;

  // Non-empty iff the node is non-terminal; strictly sorted by canonical
  // byte encoding. All vectors, tiebreaks, and partitions index this order.
  virtual std::vector<std::string> legal_actions(NodeId node) const = 0;

  // Deterministic transition by canonical action index.
  virtual NodeId apply(NodeId node, std::size_t action_index) const = 0;

  // One utility per non-chance player; terminal nodes only.
  virtual std::vector<double> utilities(NodeId node) const = 0;

  // Opaque byte string, a pure function of the node. Seeds the partition.
  virtual std::string observation(NodeId node) const = 0;

  // Probability vector over legal_actions(node); chance nodes only.
  virtual std::vector<double> chance_distribution(NodeId node) const = 0;
};

}  // namespace gamemark::efg
