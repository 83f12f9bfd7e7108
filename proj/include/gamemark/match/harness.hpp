#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gamemark/chess/pgn.hpp"
#include "gamemark/detect/detect.hpp"
#include "gamemark/match/elo.hpp"
#include "gamemark/uci/proxy.hpp"
#include "gamemark/uci/session.hpp"

namespace gamemark::match {

// One side of a match: a UCI engine, optionally watermark-wrapped. Both
// sides search with the same MultiPV settings so the comparison stays fair;
// the plain side simply plays the engine's own bestmove.
struct EngineSide {
  std::string path;
  std::vector<std::string> args;
  std::vector<std::pair<std::string, std::string>> options;
  std::optional<wm::WatermarkParams> watermark;  // set = wrapped side
  std::string name;  // label for reports and PGN tags
};

struct MatchConfig {
  EngineSide watermarked;  // side A, perspective of the report
  EngineSide baseline;     // side B
  std::string book_path;   // FEN per line; empty = start position only
  int rounds = 20;
  uci::GoLimits limits;    // per-move search limits
  int ply_cap = 300;       // adjudicated draw at the cap
  int multipv_cap = 256;
  std::string out_dir;     // empty = no files written

  // Keys: a.engine / b.engine, a.option.<N>, a.gamma/a.delta/a.key,
  // rounds, movetime_ms / nodes / depth, ply_cap, book, out_dir.
  static MatchConfig load(const std::string& path);
};

enum class RoundOutcome { kWhiteWins, kBlackWins, kDraw };

struct RoundRecord {
  int round = 0;
  bool watermarked_is_white = true;
  RoundOutcome outcome = RoundOutcome::kDraw;
  double score_watermarked = 0.5;  // 1 / 0.5 / 0
  std::string termination;         // status or forfeit note
  chess::PgnGame game;
  std::vector<detect::MoveRecord> records;  // both sides, replay-derived
  double z_watermarked = 0.0;  // this round alone
  double z_baseline = 0.0;     // this round alone
};

struct MatchReport {
  int wins = 0, draws = 0, losses = 0;  // watermarked side's perspective
  EloEstimate elo;
  std::vector<RoundRecord> rounds;
  detect::DetectionReport detection_watermarked;  // pooled across the match
  detect::DetectionReport detection_baseline;
  std::vector<double> cumulative_z_watermarked;  // per round
  std::vector<double> cumulative_z_baseline;
  double auc = 0.5;  // per-round z of watermarked vs baseline side
  bool complete = true;
};

// Plays one game from the opening. The caller owns the sessions and must
// have completed handshakes. Returns the finished record; engine failures
// become forfeits, not exceptions.
RoundRecord play_round(uci::EngineSession& white, uci::EngineSession& black,
                       const std::optional<wm::WatermarkParams>& white_wm,
                       const std::optional<wm::WatermarkParams>& black_wm,
                       const chess::Position& opening, const uci::GoLimits& limits,
                       int ply_cap, int round_index, int multipv_cap);

// Runs the full match with paired openings (each opening is played twice
// with colors swapped), aggregates the report, and writes PGN, traces, and
// CSV files when out_dir is set.
MatchReport play_match(const MatchConfig& config);

// gamma x delta grid; one match per cell, Table-style CSV via write_ablation_csv.
struct AblationCell {
  double gamma = 0.0;
  double delta = 0.0;
  MatchReport report;
  bool failed = false;
  std::string error;
};

std::vector<AblationCell> ablate(const MatchConfig& base,
                                 const std::vector<double>& gammas,
                                 const std::vector<double>& deltas);

void write_match_csv(std::ostream& out, const MatchReport& report);
void write_ablation_csv(std::ostream& out, const std::vector<AblationCell>& cells);

}  // namespace gamemark::match
