#pragma once

#include <cstdint>
#include <vector>

#include "gamemark/efg/backward_induction.hpp"
#include "gamemark/efg/game.hpp"
#include "gamemark/watermark/watermark.hpp"

namespace gamemark::efg {

// One enumerated trajectory of the watermarked agent against the oracle
// policy: per-decision regrets measured with exact oracle values.
struct TrajectoryLoss {
  int n_watermarked = 0;            // decisions where the watermark applied
  int n_decisions = 0;              // all decisions by the watermarked player
  std::vector<double> regrets;      // one per decision, >= 0
  double total_loss = 0.0;          // sum of regrets
  double probability = 1.0;         // product of chance weights on this path
  double realized_utility = 0.0;    // terminal utility for the agent
  double chance_deviation = 0.0;    // sum of V(h) - V(h·a) over chance steps
};

struct LossReport {
  double per_decision_cap = 0.0;    // delta * (1 + gamma/(1-gamma))
  double oracle_root_value = 0.0;   // watermarked player's SPNE value
  std::vector<TrajectoryLoss> trajectories;
  int violations = 0;               // bound breaches beyond tolerance
  double tolerance = 1e-9;
};

// Enumerates every trajectory with the watermarked agent in the given seat,
// the oracle (SPNE) policy elsewhere, and chance expanded over all outcomes
// with probability weights. Asserts, per trajectory, every regret <= cap and
// total loss <= n * cap; breaches are counted, not thrown.
LossReport verify_loss_bound(const Game& game, const wm::WatermarkParams& params,
                             int watermarked_player,
                             const SolveOptions& options = {});

// Monte-Carlo check of the concentration bound: X ~ Binomial(n, p) green
// choices, each costing at most the per-decision cap.
struct Theorem1Report {
  double empirical_probability = 0.0;  // Pr[L < cap * (pn + t)]
  double paper_bound = 0.0;            // 1 - exp(-2 t^2 / n^2), as printed
  double hoeffding_bound = 0.0;        // 1 - exp(-2 t^2 / n), for comparison
  double mc_stderr = 0.0;
  bool satisfied = false;  // empirical >= paper_bound - 3 * mc_stderr
};

Theorem1Report simulate_theorem1(double p, int n, double t, double gamma,
                                 double delta, int trials,
                                 std::uint64_t rng_seed = 0x5eedULL);

// Consistency of the action watermark and the expected-utility watermark:
// at every decision node, the argmax over children of the watermarked
// expected utility must equal the watermarked next action, and subtracting
// the recomputed adjustments must recover the raw oracle value.
struct ConsistencyReport {
  long long decisions_checked = 0;
  long long argmax_mismatches = 0;
  double max_inversion_error = 0.0;  // |recovered - oracle| worst case
};

ConsistencyReport check_consistency(const Game& game,
                                    const wm::WatermarkParams& params,
                                    const SolveOptions& options = {});

}  // namespace gamemark::efg
