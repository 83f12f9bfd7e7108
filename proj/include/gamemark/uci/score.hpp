#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "gamemark/chess/types.hpp"

namespace gamemark::uci {

// Maps a UCI score token pair to comparable real centipawns:
//   cp N     -> N
//   mate N   -> 1e6 - 1000*N   (N > 0)
//   mate -N  -> -1e6 + 1000*N
// The 1e6 base and 1000 step keep every mate line ordered and out of reach
// of any sane table delta, so the watermark can never flip a forced mate
// against a non-mate.
double map_score(std::string_view kind, long long value);

// Engine-reported scores for one searched position. Scores are from the
// side to move's point of view, the UCI convention.
struct ScoredMoveSet {
  std::map<chess::Move, double> scores;       // deepest complete report
  std::vector<chess::Move> unscored;          // legal but not reported
  int depth = 0;                              // depth the scores came from
  bool forced = false;                        // single legal move, no search
  chess::Move engine_best{};                  // engine's own bestmove reply
};

}  // namespace gamemark::uci
