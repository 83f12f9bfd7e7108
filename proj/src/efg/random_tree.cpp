#include "gamemark/efg/random_tree.hpp"

#include <charconv>
#include <sstream>

#include "gamemark/error.hpp"
#include "gamemark/watermark/hashing.hpp"

namespace gamemark::efg {

void RandomTreeSpec::validate() const {
  if (depth < 1) throw ContractError("RandomTreeSpec: depth must be >= 1");
  if (branching < 2 || branching > 99)
    throw ContractError("RandomTreeSpec: branching must be in [2, 99]");
  if (players != 1 && players != 2)
    throw ContractError("RandomTreeSpec: players must be 1 or 2");
  if (!(value_spread > 0.0))
    throw ContractError("RandomTreeSpec: value_spread must be > 0");
}

RandomTreeSpec RandomTreeSpec::parse(const std::string& line) {
  RandomTreeSpec spec;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    const std::size_t eq = token.find('=');
    if (eq == std::string::npos)
      throw ParseError("game spec: expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "depth") spec.depth = std::stoi(value);
      else if (key == "branching") spec.branching = std::stoi(value);
      else if (key == "players") spec.players = std::stoi(value);
      else if (key == "payoff_seed") spec.payoff_seed = std::stoull(value);
      else if (key == "value_spread") spec.value_spread = std::stod(value);
      else if (key == "type") {
        if (value != "random_tree")
          throw ParseError("game spec: unsupported type '" + value + "'");
      } else {
        throw ParseError("game spec: unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ParseError("game spec: bad value for '" + key + "'");
    } catch (const std::out_of_range&) {
      throw ParseError("game spec: value out of range for '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

std::string RandomTreeSpec::serialize() const {
  std::ostringstream out;
  out << "type=random_tree depth=" << depth << " branching=" << branching
      << " players=" << players << " payoff_seed=" << payoff_seed
      << " value_spread=" << value_spread;
  return out.str();
}

RandomTreeGame::RandomTreeGame(const RandomTreeSpec& spec) : spec_(spec) {
  spec_.validate();
  // level_start_[d] = (b^d - 1) / (b - 1); reject trees whose ids overflow
  level_start_.resize(spec_.depth + 2);
  level_start_[0] = 0;
  NodeId width = 1;
  for (int d = 0; d <= spec_.depth; ++d) {
    level_start_[d + 1] = level_start_[d] + width;
    if (width > (NodeId(1) << 57) / NodeId(spec_.branching))
      throw ContractError("RandomTreeSpec: tree too large for 64-bit node ids");
    width *= NodeId(spec_.branching);
  }
  action_names_.reserve(spec_.branching);
  for (int a = 0; a < spec_.branching; ++a) {
    char name[16];
    std::snprintf(name, sizeof(name), "a%02d", a);
    action_names_.emplace_back(name);
  }
}

int RandomTreeGame::depth_of(NodeId node) const {
  for (int d = 0; d <= spec_.depth; ++d) {
    if (node < level_start_[d + 1]) return d;
  }
  throw ContractError("RandomTreeGame: node id out of range");
}

bool RandomTreeGame::is_terminal(NodeId node) const {
  return depth_of(node) == spec_.depth;
}

int RandomTreeGame::player_to_move(NodeId node) const {
  return depth_of(node) % spec_.players;
}

std::vector<std::string> RandomTreeGame::legal_actions(NodeId node) const {
  if (is_terminal(node)) return {};
  return action_names_;
}

NodeId RandomTreeGame::apply(NodeId node, std::size_t action_index) const {
  if (is_terminal(node)) throw ContractError("RandomTreeGame: apply at terminal");
  if (action_index >= static_cast<std::size_t>(spec_.branching))
    throw ContractError("RandomTreeGame: action index out of range");
  return node * NodeId(spec_.branching) + 1 + action_index;
}

std::vector<double> RandomTreeGame::utilities(NodeId node) const {
  if (!is_terminal(node)) throw ContractError("RandomTreeGame: utilities at non-terminal");
  std::vector<double> u(spec_.players);
  for (int p = 0; p < spec_.players; ++p) {
    wm::SplitMix64 rng(spec_.payoff_seed ^ (node * 0x9E3779B97F4A7C15ULL) ^
                       (NodeId(p) << 62));
    u[p] = spec_.value_spread * rng.next_unit();
  }
  return u;
}

std::string RandomTreeGame::observation(NodeId node) const {
  std::ostringstream out;
  out << "rt:" << std::hex << spec_.payoff_seed << ":" << std::dec << node;
  return out.str();
}

std::vector<double> RandomTreeGame::chance_distribution(NodeId) const {
  throw ContractError("RandomTreeGame: no chance nodes");
}

}  // namespace gamemark::efg
