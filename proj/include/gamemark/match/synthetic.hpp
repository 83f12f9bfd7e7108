#pragma once

#include <cstdint>
#include <vector>

#include "gamemark/detect/detect.hpp"
#include "gamemark/watermark/watermark.hpp"

namespace gamemark::match {

// A stream of synthetic decision points: fresh observations along a walk
// through an implicit game tree, iid uniform oracle values per action.
// This is the desk-scale stand-in for engine play in the null-hypothesis,
// detectability, ablation, and attacker studies.
struct SyntheticSpec {
  int decisions = 200;
  int branching = 20;         // legal actions per decision
  double value_low = 0.0;     // oracle values uniform on [low, high)
  double value_high = 1.0;
  std::uint64_t seed = 1;
  int player = 0;
  int decisions_per_round = 50;  // stamps round indices on the records
};

enum class AgentKind {
  kWatermarked,     // the adapted watermark, plain
  kOblivious,       // uniform random over all legal actions (null model)
  kTopK,            // top-k by watermarked value, uniform among them
  kIntermittent,    // watermark with probability q, else uniform random
};

struct AgentSpec {
  AgentKind kind = AgentKind::kWatermarked;
  int top_k = 1;          // kTopK
  double use_rate = 1.0;  // kIntermittent: probability of consulting the watermark
};

// Simulates the stream and returns the per-decision records. Observations
// are a deterministic hash chain from the seed, so identical specs replay
// identically.
std::vector<detect::MoveRecord> simulate_decisions(const SyntheticSpec& spec,
                                                   const wm::WatermarkParams& params,
                                                   const AgentSpec& agent);

struct AttackerOutcome {
  std::vector<detect::MoveRecord> records;
  detect::DetectionReport report;
  // first counted decision whose cumulative z reaches the threshold, or -1
  int crossing_index = -1;
  double max_z = 0.0;
};

AttackerOutcome run_attacker(const SyntheticSpec& spec,
                             const wm::WatermarkParams& params,
                             const AgentSpec& agent, double threshold = 4.0);

}  // namespace gamemark::match
