#include "gamemark/match/synthetic.hpp"

#include <algorithm>
#include <cstdio>

#include "gamemark/error.hpp"
#include "gamemark/watermark/hashing.hpp"

namespace gamemark::match {

std::vector<detect::MoveRecord> simulate_decisions(const SyntheticSpec& spec,
                                                   const wm::WatermarkParams& params,
                                                   const AgentSpec& agent) {
  params.validate();
  if (spec.decisions < 1 || spec.branching < 2 || spec.branching > 99)
    throw ContractError(
        "simulate_decisions: need decisions >= 1 and branching in [2, 99]");
  if (!(spec.value_high > spec.value_low))
    throw ContractError("simulate_decisions: empty value range");

  std::vector<std::string> actions;
  actions.reserve(spec.branching);
  for (int a = 0; a < spec.branching; ++a) {
    char name[16];
    std::snprintf(name, sizeof(name), "a%02d", a);
    actions.emplace_back(name);
  }

  wm::SplitMix64 rng(spec.seed);
  std::uint64_t walk = spec.seed;  // hash chain: observation per decision
  const double span = spec.value_high - spec.value_low;

  std::vector<detect::MoveRecord> records;
  records.reserve(spec.decisions);
  for (int i = 0; i < spec.decisions; ++i) {
    char obs[32];
    std::snprintf(obs, sizeof(obs), "syn:%016llx",
                  static_cast<unsigned long long>(walk));

    std::vector<double> values(spec.branching);
    for (double& v : values) v = spec.value_low + span * rng.next_unit();

    std::size_t chosen;
    switch (agent.kind) {
      case AgentKind::kWatermarked:
        chosen = wm::next_action(obs, actions, values, params).action_index;
        break;
      case AgentKind::kOblivious:
        chosen = std::size_t(rng.next_bounded(std::uint64_t(spec.branching)));
        break;
      case AgentKind::kTopK: {
        if (agent.top_k < 1) throw ContractError("simulate_decisions: top_k >= 1");
        const std::uint64_t seed = wm::seed_from_observation(obs, params.key);
        const wm::Partition part = wm::partition_actions(actions, seed, params.gamma);
        const std::vector<double> adjusted = wm::adjust_values(values, part, params);
        std::vector<std::size_t> order(adjusted.size());
        for (std::size_t a = 0; a < order.size(); ++a) order[a] = a;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          return adjusted[a] > adjusted[b];
        });
        const std::size_t k =
            std::min<std::size_t>(std::size_t(agent.top_k), order.size());
        // k = 1 degenerates to the watermarked agent; draw nothing so the
        // two agents stay decision-for-decision identical
        chosen = k == 1 ? order[0] : order[rng.next_bounded(k)];
        break;
      }
      case AgentKind::kIntermittent: {
        if (rng.next_unit() < agent.use_rate) {
          chosen = wm::next_action(obs, actions, values, params).action_index;
        } else {
          chosen = std::size_t(rng.next_bounded(std::uint64_t(spec.branching)));
        }
        break;
      }
      default:
        throw ContractError("simulate_decisions: unknown agent kind");
    }

    detect::MoveRecord rec;
    rec.observation = obs;
    rec.actions = actions;
    rec.chosen = actions[chosen];
    rec.player = spec.player;
    rec.round = spec.decisions_per_round > 0 ? i / spec.decisions_per_round : 0;
    rec.move = spec.decisions_per_round > 0 ? i % spec.decisions_per_round : i;
    walk = wm::fnv1a64(rec.chosen, walk ^ 0x6a09e667f3bcc908ULL);
    records.push_back(std::move(rec));
  }
  return records;
}

AttackerOutcome run_attacker(const SyntheticSpec& spec,
                             const wm::WatermarkParams& params,
                             const AgentSpec& agent, double threshold) {
  AttackerOutcome outcome;
  outcome.records = simulate_decisions(spec, params, agent);
  outcome.report = detect::analyze(outcome.records, params, spec.player);
  bool first = true;
  for (const detect::DecisionPoint& pt : outcome.report.trace) {
    outcome.max_z = first ? pt.z : std::max(outcome.max_z, pt.z);
    first = false;
    if (outcome.crossing_index < 0 && pt.z >= threshold)
      outcome.crossing_index = int(pt.n);
  }
  return outcome;
}

}  // namespace gamemark::match
