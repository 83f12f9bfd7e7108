#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gamemark/watermark/hashing.hpp"

namespace gamemark::wm {

struct WatermarkParams {
  double gamma = 0.25;    // green list fraction, in (0, 1)
  double delta = 0.5;     // hardness, in the value oracle's own units
  std::string key;        // empty = public watermark
  int min_branching = 2;  // decisions with fewer legal actions pass through

  void validate() const;

  // Penalty applied to red-list values; the expected adjustment under the
  // partition proportions is zero: gamma*delta + (1-gamma)*red_adjustment() == 0.
  double red_adjustment() const { return -gamma * delta / (1.0 - gamma); }

  // Worst-case per-decision utility loss: delta * (1 + gamma/(1-gamma)).
  double per_decision_loss_cap() const {
    return delta * (1.0 + gamma / (1.0 - gamma));
  }
};

// Deterministic green/red split of a canonically ordered action set.
struct Partition {
  std::vector<std::string> green;  // canonical order
  std::vector<std::string> red;    // canonical order
  std::uint64_t seed = 0;
  std::vector<bool> green_mask;    // indexed in canonical action order

  bool is_green(std::size_t action_index) const { return green_mask[action_index]; }
};

// Green list size: clamp(round(gamma*|A|), 1, |A|-1). Round = half up.
std::size_t green_list_size(std::size_t action_count, double gamma);

// Partitions a strictly sorted action list. Throws ContractError on fewer
// than 2 actions, unsorted input, or duplicates.
Partition partition_actions(std::span<const std::string> actions,
                            std::uint64_t seed, double gamma);

// v_a = u_a + delta (green) or u_a - gamma*delta/(1-gamma) (red).
std::vector<double> adjust_values(std::span<const double> values,
                                  const Partition& partition,
                                  const WatermarkParams& params);

// The outcome of one watermarked decision, consumed by detection and the
// loss-bound verifier.
struct Decision {
  std::string action;
  std::size_t action_index = 0;   // canonical order
  bool watermarked = false;       // false when |A| < min_branching
  bool green = false;             // meaningful only when watermarked
  std::uint64_t seed = 0;
  std::optional<Partition> partition;  // present when watermarked
};

// Algorithm: query values, seed from the observation, partition, adjust,
// argmax. Ties in adjusted value break green-first, then canonical order,
// so delta = 0 realizes the pure tiebreaking regime exactly.
//
// `actions` must be strictly sorted canonically; `values` is indexed the
// same way and carries one entry per action.
Decision next_action(std::string_view observation,
                     std::span<const std::string> actions,
                     std::span<const double> values,
                     const WatermarkParams& params);

// One prefix step of a trajectory, as consumed by the expected-utility
// watermark: the observation before acting, the legal set, and the action
// actually taken.
struct TrajectoryStep {
  std::string observation;
  std::vector<std::string> actions;  // canonical order
  std::string chosen;
};

// Expected-utility watermark: start from the raw oracle value at the
// trajectory's endpoint and add the green/red adjustment of every prefix
// step that has a defined partition (|A| >= min_branching). Steps below
// min_branching contribute nothing.
double watermarked_expected_utility(std::span<const TrajectoryStep> trajectory,
                                    double oracle_value_at_endpoint,
                                    const WatermarkParams& params);

// The adjustment sum on its own; subtracting it from a watermarked expected
// utility recovers the raw oracle value (the documented reason keyed
// deployments exist).
double adjustment_sum(std::span<const TrajectoryStep> trajectory,
                      const WatermarkParams& params);

}  // namespace gamemark::wm
