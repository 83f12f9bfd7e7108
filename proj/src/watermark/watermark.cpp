#include "gamemark/watermark/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "gamemark/error.hpp"

namespace gamemark::wm {

std::uint64_t seed_from_observation(std::string_view obs, std::string_view key) {
  if (obs.empty()) throw ContractError("seed_from_observation: empty observation");
  std::uint64_t h = fnv1a64(key);
  h ^= kSeedSeparator;
  h *= kFnvPrime;
  return fnv1a64(obs, h);
}

void WatermarkParams::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ContractError("WatermarkParams: gamma must be in (0, 1)");
  if (!(delta >= 0.0)) throw ContractError("WatermarkParams: delta must be >= 0");
  if (min_branching < 2)
    throw ContractError("WatermarkParams: min_branching must be >= 2");
}

std::size_t green_list_size(std::size_t action_count, double gamma) {
  const auto rounded =
      static_cast<std::size_t>(std::floor(gamma * double(action_count) + 0.5));
  return std::clamp<std::size_t>(rounded, 1, action_count - 1);
}

Partition partition_actions(std::span<const std::string> actions,
                            std::uint64_t seed, double gamma) {
  if (actions.size() < 2)
    throw ContractError("partition_actions: need at least 2 actions");
  for (std::size_t i = 1; i < actions.size(); ++i) {
    if (!(actions[i - 1] < actions[i]))
      throw ContractError("partition_actions: actions must be strictly sorted");
  }

  std::vector<std::size_t> order(actions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  SplitMix64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    const std::size_t j = rng.next_bounded(i + 1);
    std::swap(order[i], order[j]);
  }

  const std::size_t g = green_list_size(actions.size(), gamma);

  Partition part;
  part.seed = seed;
  part.green_mask.assign(actions.size(), false);
  for (std::size_t i = 0; i < g; ++i) part.green_mask[order[i]] = true;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    (part.green_mask[i] ? part.green : part.red).push_back(actions[i]);
  }
  return part;
}

std::vector<double> adjust_values(std::span<const double> values,
                                  const Partition& partition,
                                  const WatermarkParams& params) {
  if (values.size() != partition.green_mask.size())
    throw ContractError("adjust_values: value/partition length mismatch");
  const double red_adj = params.red_adjustment();
  std::vector<double> adjusted(values.begin(), values.end());
  for (std::size_t i = 0; i < adjusted.size(); ++i) {
    adjusted[i] += partition.is_green(i) ? params.delta : red_adj;
  }
  return adjusted;
}

namespace {

// argmax with the documented tiebreak: higher value wins; on exact ties,
// green beats red, then the lower canonical index wins.
std::size_t argmax_green_first(std::span<const double> values,
                               const std::vector<bool>* green_mask) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) {
      best = i;
    } else if (values[i] == values[best] && green_mask != nullptr &&
               (*green_mask)[i] && !(*green_mask)[best]) {
      best = i;
    }
  }
  return best;
}

}  // namespace

Decision next_action(std::string_view observation,
                     std::span<const std::string> actions,
                     std::span<const double> values,
                     const WatermarkParams& params) {
  params.validate();
  if (actions.empty()) throw ContractError("next_action: empty action set");
  if (actions.size() != values.size())
    throw ContractError("next_action: one value per action required");

  Decision decision;
  if (actions.size() < static_cast<std::size_t>(params.min_branching)) {
    decision.action_index = argmax_green_first(values, nullptr);
    decision.action = actions[decision.action_index];
    decision.watermarked = false;
    return decision;
  }

  const std::uint64_t seed = seed_from_observation(observation, params.key);
  Partition part = partition_actions(actions, seed, params.gamma);
  const std::vector<double> adjusted = adjust_values(values, part, params);

  decision.action_index = argmax_green_first(adjusted, &part.green_mask);
  decision.action = actions[decision.action_index];
  decision.watermarked = true;
  decision.green = part.is_green(decision.action_index);
  decision.seed = seed;
  decision.partition = std::move(part);
  return decision;
}

double adjustment_sum(std::span<const TrajectoryStep> trajectory,
                      const WatermarkParams& params) {
  params.validate();
  const double red_adj = params.red_adjustment();
  double sum = 0.0;
  for (const TrajectoryStep& step : trajectory) {
    if (step.actions.size() < static_cast<std::size_t>(params.min_branching))
      continue;
    const std::uint64_t seed = seed_from_observation(step.observation, params.key);
    const Partition part = partition_actions(step.actions, seed, params.gamma);
    const auto it =
        std::lower_bound(step.actions.begin(), step.actions.end(), step.chosen);
    if (it == step.actions.end() || *it != step.chosen)
      throw ContractError("adjustment_sum: chosen action not in the legal set");
    const auto index = static_cast<std::size_t>(it - step.actions.begin());
    sum += part.is_green(index) ? params.delta : red_adj;
  }
  return sum;
}

double watermarked_expected_utility(std::span<const TrajectoryStep> trajectory,
                                    double oracle_value_at_endpoint,
                                    const WatermarkParams& params) {
  return oracle_value_at_endpoint + adjustment_sum(trajectory, params);
}

}  // namespace gamemark::wm
