#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gamemark/chess/position.hpp"
#include "gamemark/detect/record.hpp"

namespace gamemark::chess {

// SAN for a legal move in the given position, with minimal disambiguation
// and +/# suffixes.
std::string to_san(const Position& p, const Move& m);

// Resolves SAN against the legal move set. Annotations (+, #, !, ?) are
// stripped. Ambiguous or illegal SAN raises ParseError with the ply text.
Move from_san(const Position& p, std::string_view san);

struct PgnGame {
  std::vector<std::pair<std::string, std::string>> tags;
  std::string start_fen = kStartFen;  // FEN tag when present
  std::vector<Move> moves;
  std::string result = "*";

  std::string tag(const std::string& name, const std::string& fallback = "?") const;
};

// Parses every game in the text. Comments, NAGs, and variations are skipped;
// each SAN token is resolved against the replayed position.
std::vector<PgnGame> parse_pgn(std::string_view text);

std::string emit_pgn(const PgnGame& game);

// Replays a game into detector records: one per ply, with the pre-move
// observation, the legal set in canonical order, and the move played.
// Player 0 is white. `round` stamps every record.
std::vector<detect::MoveRecord> to_move_records(const PgnGame& game, int round);

}  // namespace gamemark::chess
