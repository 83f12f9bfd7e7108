#include "gamemark/chess/types.hpp"

#include "gamemark/error.hpp"

namespace gamemark::chess {

std::string square_name(Square sq) {
  std::string name(2, '?');
  name[0] = char('a' + file_of(sq));
  name[1] = char('1' + rank_of(sq));
  return name;
}

Square parse_square(std::string_view name) {
  if (name.size() != 2 || name[0] < 'a' || name[0] > 'h' || name[1] < '1' ||
      name[1] > '8')
    throw ParseError("invalid square '" + std::string(name) + "'");
  return make_square(name[0] - 'a', name[1] - '1');
}

char piece_char(PieceCode pc) {
  static constexpr const char* kWhite = ".PNBRQK";
  const char c = kWhite[piece_type(pc)];
  return is_black(pc) ? char(c - 'A' + 'a') : c;
}

PieceCode piece_from_char(char c) {
  const bool black = c >= 'a';
  switch (black ? char(c - 'a' + 'A') : c) {
    case 'P': return black ? -kPawn : kPawn;
    case 'N': return black ? -kKnight : kKnight;
    case 'B': return black ? -kBishop : kBishop;
    case 'R': return black ? -kRook : kRook;
    case 'Q': return black ? -kQueen : kQueen;
    case 'K': return black ? -kKing : kKing;
    default: throw ParseError(std::string("invalid piece letter '") + c + "'");
  }
}

std::string Move::uci() const {
  std::string text = square_name(from) + square_name(to);
  if (promotion != 0) text.push_back(promotion);
  return text;
}

Move Move::parse(std::string_view text) {
  if (text.size() != 4 && text.size() != 5)
    throw ParseError("invalid move '" + std::string(text) + "'");
  Move m;
  m.from = parse_square(text.substr(0, 2));
  m.to = parse_square(text.substr(2, 2));
  if (text.size() == 5) {
    const char promo = text[4];
    if (promo != 'q' && promo != 'r' && promo != 'b' && promo != 'n')
      throw ParseError("invalid promotion in '" + std::string(text) + "'");
    m.promotion = promo;
  }
  return m;
}

}  // namespace gamemark::chess
