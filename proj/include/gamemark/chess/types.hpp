#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gamemark::chess {

// Squares are 0..63 with a1 = 0, h1 = 7, a8 = 56, h8 = 63.
using Square = int;
inline constexpr Square kNoSquare = -1;

constexpr int file_of(Square sq) { return sq & 7; }
constexpr int rank_of(Square sq) { return sq >> 3; }
constexpr Square make_square(int file, int rank) { return rank * 8 + file; }

std::string square_name(Square sq);
Square parse_square(std::string_view name);  // throws ParseError

enum class Color : std::int8_t { White = 0, Black = 1 };
constexpr Color opponent(Color c) {
  return c == Color::White ? Color::Black : Color::White;
}

// Signed piece codes: 0 empty, +1..+6 white P N B R Q K, negative black.
using PieceCode = std::int8_t;
inline constexpr PieceCode kEmpty = 0;
enum : PieceCode { kPawn = 1, kKnight = 2, kBishop = 3, kRook = 4, kQueen = 5, kKing = 6 };

constexpr bool is_white(PieceCode pc) { return pc > 0; }
constexpr bool is_black(PieceCode pc) { return pc < 0; }
constexpr int piece_type(PieceCode pc) { return pc < 0 ? -pc : pc; }
constexpr Color piece_color(PieceCode pc) {
  return pc > 0 ? Color::White : Color::Black;
}

char piece_char(PieceCode pc);            // FEN letter, e.g. 'N' or 'p'
PieceCode piece_from_char(char c);        // throws ParseError

// Castling right bits.
enum : std::uint8_t {
  kWhiteKingside = 1,
  kWhiteQueenside = 2,
  kBlackKingside = 4,
  kBlackQueenside = 8,
};

// A move in coordinate form; canonical encoding is the lowercase UCI string
// (e.g. "e2e4", "e7e8q"). Castling is the king's two-square move.
struct Move {
  Square from = kNoSquare;
  Square to = kNoSquare;
  char promotion = 0;  // 'q', 'r', 'b', 'n', or 0

  std::string uci() const;
  static Move parse(std::string_view text);  // throws ParseError

  bool operator==(const Move&) const = default;

  // Matches lexicographic order of the canonical strings.
  auto ordering_key() const {
    return std::array<int, 5>{file_of(from), rank_of(from), file_of(to),
                              rank_of(to), int(promotion)};
  }
};

inline bool operator<(const Move& a, const Move& b) {
  return a.ordering_key() < b.ordering_key();
}

}  // namespace gamemark::chess
