#include "gamemark/efg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gamemark/error.hpp"

namespace gamemark::efg {

namespace {

struct PathState {
  NodeId node;
  TrajectoryLoss partial;
};

}  // namespace

LossReport verify_loss_bound(const Game& game, const wm::WatermarkParams& params,
                             int watermarked_player,
                             const SolveOptions& options) {
  params.validate();
  if (watermarked_player < 0 || watermarked_player >= game.num_players())
    throw ContractError("verify_loss_bound: player index out of range");

  const ValueTable table = backward_induction(game, options);

  LossReport report;
  report.per_decision_cap = params.per_decision_loss_cap();
  report.oracle_root_value = table.at(game.root())[watermarked_player];

  std::vector<PathState> pending;
  pending.push_back({game.root(), {}});

  while (!pending.empty()) {
    PathState state = std::move(pending.back());
    pending.pop_back();

    NodeId node = state.node;
    TrajectoryLoss traj = std::move(state.partial);

    for (;;) {
      if (game.is_terminal(node)) {
        traj.realized_utility = game.utilities(node)[watermarked_player];
        const double cap = double(traj.n_watermarked) * report.per_decision_cap;
        for (double r : traj.regrets) {
          if (r > report.per_decision_cap + report.tolerance) ++report.violations;
        }
        if (traj.total_loss > cap + report.tolerance) ++report.violations;
        report.trajectories.push_back(std::move(traj));
        break;
      }

      const int player = game.player_to_move(node);
      if (player == kChance) {
        // branch over every outcome with its weight; continue on the last
        const std::vector<double> probs = game.chance_distribution(node);
        const double here = table.at(node)[watermarked_player];
        for (std::size_t a = 0; a + 1 < probs.size(); ++a) {
          PathState branch{game.apply(node, a), traj};
          branch.partial.probability *= probs[a];
          branch.partial.chance_deviation +=
              here - table.at(branch.node)[watermarked_player];
          pending.push_back(std::move(branch));
        }
        const std::size_t last = probs.size() - 1;
        const NodeId child = game.apply(node, last);
        traj.probability *= probs[last];
        traj.chance_deviation += here - table.at(child)[watermarked_player];
        node = child;
        continue;
      }

      if (player != watermarked_player) {
        node = game.apply(node, table.best_action.at(node));
        continue;
      }

      const std::vector<std::string> actions = game.legal_actions(node);
      const std::vector<double> oracle = expected_utilities(game, table, node);
      const wm::Decision decision =
          wm::next_action(game.observation(node), actions, oracle, params);
      const double best = *std::max_element(oracle.begin(), oracle.end());
      const double regret = best - oracle[decision.action_index];

      ++traj.n_decisions;
      if (decision.watermarked) ++traj.n_watermarked;
      traj.regrets.push_back(regret);
      traj.total_loss += regret;
      node = game.apply(node, decision.action_index);
    }
  }
  return report;
}

Theorem1Report simulate_theorem1(double p, int n, double t, double gamma,
                                 double delta, int trials,
                                 std::uint64_t rng_seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ContractError("simulate_theorem1: p in [0,1]");
  if (n < 1) throw ContractError("simulate_theorem1: n >= 1");
  if (!(t > 0.0)) throw ContractError("simulate_theorem1: t > 0");
  if (trials < 1) throw ContractError("simulate_theorem1: trials >= 1");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ContractError("simulate_theorem1: gamma in (0,1)");
  if (!(delta >= 0.0)) throw ContractError("simulate_theorem1: delta >= 0");

  const double cap = delta * (1.0 + gamma / (1.0 - gamma));
  const double loss_limit = cap * (p * double(n) + t);

  std::mt19937_64 rng(rng_seed);
  std::binomial_distribution<int> greens(n, p);
  long long hits = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const int x = p == 0.0 ? 0 : (p == 1.0 ? n : greens(rng));
    const double loss = double(x) * cap;
    if (loss < loss_limit) ++hits;
  }

  Theorem1Report report;
  report.empirical_probability = double(hits) / double(trials);
  // the exponent n^2 is as printed in the source theorem; the plain
  // Hoeffding form with exponent n is reported alongside for comparison
  report.paper_bound = 1.0 - std::exp(-2.0 * t * t / (double(n) * double(n)));
  report.hoeffding_bound = 1.0 - std::exp(-2.0 * t * t / double(n));
  report.mc_stderr = std::sqrt(std::max(
      report.empirical_probability * (1.0 - report.empirical_probability), 1e-12) /
      double(trials));
  report.satisfied =
      report.empirical_probability >= report.paper_bound - 3.0 * report.mc_stderr;
  return report;
}

ConsistencyReport check_consistency(const Game& game,
                                    const wm::WatermarkParams& params,
                                    const SolveOptions& options) {
  params.validate();
  const ValueTable table = backward_induction(game, options);

  ConsistencyReport report;

  struct Frame {
    NodeId node;
    std::vector<wm::TrajectoryStep> prefix;
  };
  std::vector<Frame> pending;
  pending.push_back({game.root(), {}});

  while (!pending.empty()) {
    Frame frame = std::move(pending.back());
    pending.pop_back();
    const NodeId node = frame.node;
    if (game.is_terminal(node)) continue;

    const int player = game.player_to_move(node);
    const std::vector<std::string> actions = game.legal_actions(node);

    if (player != kChance) {
      const std::vector<double> oracle = expected_utilities(game, table, node);
      const wm::Decision decision =
          wm::next_action(game.observation(node), actions, oracle, params);

      // argmax over children of the watermarked expected utility, using the
      // same tiebreak (green-first, then canonical order)
      std::size_t best = 0;
      double best_weu = -std::numeric_limits<double>::infinity();
      bool best_green = false;
      for (std::size_t a = 0; a < actions.size(); ++a) {
        std::vector<wm::TrajectoryStep> traj = frame.prefix;
        traj.push_back({game.observation(node), actions, actions[a]});
        const double weu =
            wm::watermarked_expected_utility(traj, oracle[a], params);
        const bool green = decision.partition.has_value()
                               ? decision.partition->is_green(a)
                               : false;
        if (weu > best_weu || (weu == best_weu && green && !best_green)) {
          best_weu = weu;
          best = a;
          best_green = green;
        }

        // inverting the adjustments must recover the raw oracle value
        const double recovered = weu - wm::adjustment_sum(traj, params);
        report.max_inversion_error =
            std::max(report.max_inversion_error, std::abs(recovered - oracle[a]));
      }
      ++report.decisions_checked;
      if (best != decision.action_index) ++report.argmax_mismatches;
    }

    for (std::size_t a = 0; a < actions.size(); ++a) {
      Frame child{game.apply(node, a), frame.prefix};
      child.prefix.push_back({game.observation(node), actions, actions[a]});
      pending.push_back(std::move(child));
    }
  }
  return report;
}

}  // namespace gamemark::efg
