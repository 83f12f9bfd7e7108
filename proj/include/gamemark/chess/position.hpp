#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gamemark/chess/types.hpp"

namespace gamemark::chess {

inline constexpr const char* kStartFen =
    "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

// An immutable chess position. apply_move returns a new value; nothing here
// mutates in place, so positions are safe to share across threads.
struct Position {
  std::array<PieceCode, 64> board{};
  Color side_to_move = Color::White;
  std::uint8_t castling = 0;
  Square ep_square = kNoSquare;  // raw double-push target, kNoSquare if none
  int halfmove_clock = 0;
  int fullmove_number = 1;
  // Observation keys of positions since the last irreversible move, most
  // recent last (always includes this position). Drives threefold detection.
  std::vector<std::uint64_t> repetition_keys;

  PieceCode at(Square sq) const { return board[sq]; }
  Square king_square(Color c) const;
};

// FEN with 4, 5, or 6 fields (EPD-style inputs allowed; clocks default 0/1).
// Rejects structurally invalid positions with an error naming the field.
Position parse_fen(std::string_view fen);

// Canonical FEN. The en-passant field is written only when an en-passant
// capture is actually legal, matching the position-identity convention used
// for repetition detection and observations.
std::string emit_fen(const Position& p);

// Canonical observation bytes: FEN fields 1-4 (placement, side, castling,
// en passant), space-separated, clocks excluded. The exact layout is
// normative; see PARTITION-FORMAT.md.
std::string observation(const Position& p);
std::uint64_t observation_key(const Position& p);

bool square_attacked(const Position& p, Square sq, Color by);
bool in_check(const Position& p);

// Full legal move set under FIDE rules, strictly sorted by canonical
// encoding. Empty iff the game is over (mate or stalemate).
std::vector<Move> legal_moves(const Position& p);

// Applies a legal move, updating clocks, rights, en passant, and the
// repetition history. Throws ContractError when the move is not legal.
Position apply_move(const Position& p, const Move& m);

enum class Status {
  kOngoing,
  kCheckmate,        // side to move is mated
  kStalemate,
  kDrawFiftyMove,
  kDrawThreefold,
  kDrawInsufficient,
};

bool is_draw_status(Status s);
// Score from white's perspective: 1 win, 0.5 draw, 0 loss.
double status_score_white(const Position& p, Status s);
std::string status_name(Status s);

Status game_status(const Position& p);

// Exhaustive node count to the given depth; ignores repetition state.
std::uint64_t perft(const Position& p, int depth);

// FEN-per-line opening book ('#' comments, blank lines skipped).
std::vector<Position> load_fen_book(const std::string& path);

}  // namespace gamemark::chess
